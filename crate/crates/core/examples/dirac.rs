//! Dirac reduction of the AB algebra onto block-upper-triangular B.

use bilinear_poisson::dirac::{dirac_check, f_system_det_check, DiracProperty};
use bilinear_poisson::poisson::Options;
use bilinear_poisson::tensor::QCase;

fn main() -> bilinear_poisson::Result<()> {
    let opts = Options::symbolic();
    for (prop, case) in [
        (DiracProperty::Gram, QCase::II),
        (DiracProperty::Central, QCase::II),
        (DiracProperty::Jacobi, QCase::II),
        (DiracProperty::SingularGram, QCase::I),
    ] {
        let r = dirac_check(prop, 2, case, &opts)?;
        println!("{prop:?} case {}: {} {}", case.label(), r.pass, r.detail.unwrap_or_default());
    }
    for n in 2..=4 {
        let r = f_system_det_check(n)?;
        println!("F-system determinant n={n}: {} {}", r.pass, r.detail.unwrap_or_default());
    }
    Ok(())
}
