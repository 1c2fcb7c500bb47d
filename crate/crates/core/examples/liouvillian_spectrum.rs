//! Eigenvalues of the 9×9 Liouvillian with and without drive.

use dqd_dynamics::model::{build_driven, build_undriven, REFERENCE_RATES};
use dqd_dynamics::propagator::{liouvillian_spectrum, spectral_gap};
use dqd_dynamics::quantum::Generator;

fn show(label: &str, gen: &Generator) {
    let mut spec = liouvillian_spectrum(gen);
    spec.sort_by(|a, b| a.re.total_cmp(&b.re).then(a.im.total_cmp(&b.im)));
    println!("{label}: gap {:.4}", spectral_gap(gen).unwrap_or(f64::NAN));
    for z in spec {
        println!("    {:+.5} {:+.5}i", z.re, z.im);
    }
}

fn main() -> dqd_dynamics::Result<()> {
    show("undriven", &build_undriven(&REFERENCE_RATES)?);
    for p in [0.4, 8.0] {
        show(
            &format!("p = {p}"),
            &build_driven(&REFERENCE_RATES.with_p(p)?)?,
        );
    }
    Ok(())
}
