//! CSV emission. Floats use the shortest round-trip form (`{:?}`), which
//! switches to exponent notation for very small or large magnitudes.

use std::fmt::Write as _;

use crate::dynamics::Trajectory;

pub const TRAJECTORY_HEADER: &str =
    "t,rho11_re,rho12_re,rho12_im,rho13_re,rho13_im,rho14_re,rho14_im,\
rho22_re,rho23_re,rho23_im,rho24_re,rho24_im,rho33_re,rho34_re,rho34_im,rho44_re,\
concurrence,purity,coh_a,f_r,d_int";

/// Renders a two-qubit trajectory, one row per grid time.
pub fn trajectory_csv(traj: &Trajectory) -> String {
    let conc = traj.concurrence.as_deref().unwrap_or(&[]);
    let coh = traj.coherence_a.as_deref().unwrap_or(&[]);
    let mut out = String::with_capacity(traj.len() * 400);
    out.push_str(TRAJECTORY_HEADER);
    out.push('\n');
    for (k, state) in traj.states.iter().enumerate() {
        write!(out, "{:?}", traj.times[k]).unwrap();
        for i in 0..4 {
            for j in i..4 {
                let z = state.get(i, j);
                write!(out, ",{:?}", z.re).unwrap();
                if i != j {
                    write!(out, ",{:?}", z.im).unwrap();
                }
            }
        }
        writeln!(
            out,
            ",{:?},{:?},{:?},{:?},{:?}",
            conc[k], traj.purity[k], coh[k], traj.f_re[k], traj.d[k]
        )
        .unwrap();
    }
    out
}

/// Formats an optional value; exclusions become empty cells.
pub fn cell<E>(v: &Result<f64, E>) -> String {
    match v {
        Ok(x) => format!("{x:?}"),
        Err(_) => String::new(),
    }
}
