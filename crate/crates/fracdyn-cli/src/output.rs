//! File emission: atomic writes, trajectory CSV, and gnuplot scripts.

use std::fs;
use std::io;
use std::path::Path;

use fracdyn::Trajectory;

use crate::config::RunConfig;

/// Writes `contents` to `path` via a temporary file in the same directory
/// followed by a rename, so a partially written file never appears under the
/// final name.
pub fn atomic_write(path: &Path, contents: &[u8]) -> io::Result<()> {
    let file_name = path
        .file_name()
        .ok_or_else(|| io::Error::new(io::ErrorKind::InvalidInput, "output path has no file name"))?;
    let mut tmp_name = file_name.to_os_string();
    tmp_name.push(format!(".tmp.{}", std::process::id()));
    let tmp = path.with_file_name(tmp_name);
    fs::write(&tmp, contents)?;
    match fs::rename(&tmp, path) {
        Ok(()) => Ok(()),
        Err(e) => {
            let _ = fs::remove_file(&tmp);
            Err(e)
        }
    }
}

/// Renders a trajectory as CSV: a config-echo comment, the `t,x,y,z`
/// header, and one newline-terminated row per grid point with every number
/// at 17 significant digits.
pub fn trajectory_csv(traj: &Trajectory, config: &RunConfig) -> String {
    let n = traj.states().first().map_or(0, |s| s.dim());
    let mut out = String::with_capacity(traj.len() * (n + 1) * 26 + 256);
    out.push_str("# fracdyn trajectory\n");
    out.push_str(&format!("# config: {}\n", config.to_json_line()));
    out.push_str(header_for_dim(n));
    out.push('\n');
    for (t, s) in traj.times().iter().zip(traj.states()) {
        push_sig17(&mut out, *t);
        for c in s.iter() {
            out.push(',');
            push_sig17(&mut out, *c);
        }
        out.push('\n');
    }
    out
}

fn header_for_dim(n: usize) -> &'static str {
    match n {
        3 => "t,x,y,z",
        _ => "t,components...",
    }
}

// {:.16e} prints one leading digit plus 16 fractional digits: 17 significant
// digits, enough to reproduce any f64 exactly.
fn push_sig17(out: &mut String, v: f64) {
    out.push_str(&format!("{v:.16e}"));
}

/// A gnuplot script that renders the CSV written next to it: the three time
/// series plus the 3-D phase portrait.
pub fn gnuplot_script(csv_name: &str, png_name: &str) -> String {
    format!(
        "# gnuplot script generated by fracdyn; run: gnuplot <this file>\n\
         set terminal pngcairo size 1280,960\n\
         set output '{png_name}'\n\
         set datafile separator ','\n\
         set multiplot layout 2,2\n\
         set xlabel 't'\n\
         plot '{csv_name}' every ::1 using 1:2 with lines lw 1 title 'x(t)'\n\
         plot '{csv_name}' every ::1 using 1:3 with lines lw 1 title 'y(t)'\n\
         plot '{csv_name}' every ::1 using 1:4 with lines lw 1 title 'z(t)'\n\
         set xlabel 'x'\n\
         set ylabel 'y'\n\
         set zlabel 'z'\n\
         splot '{csv_name}' every ::1 using 2:3:4 with lines lw 0.5 title 'phase portrait'\n\
         unset multiplot\n"
    )
}

/// Pretty, canonically ordered JSON with a trailing newline. `serde_json`
/// maps are sorted, so re-parsing and re-rendering is byte-stable.
pub fn render_json(value: &serde_json::Value) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("value renders");
    s.push('\n');
    s
}
