//! Jacobi identity for a few algebras, and the sign of some catalog maps.

use bilinear_poisson::poisson::catalog::map_case;
use bilinear_poisson::poisson::checks::{jacobi_check, poisson_map_check};
use bilinear_poisson::poisson::{AlgebraSpec, MapMode, Options, PoissonAlgebra};
use bilinear_poisson::tensor::QCase;

fn main() -> bilinear_poisson::Result<()> {
    let specs = [AlgebraSpec::a(3), AlgebraSpec::bc(2), AlgebraSpec::abc(2, QCase::III), AlgebraSpec::b_chain(2, 2, QCase::II)];
    for spec in &specs {
        let r = jacobi_check(&PoissonAlgebra::build(spec)?, &Options::symbolic())?;
        println!("jacobi {:<20} N={} {}", spec.label(), spec.n, if r.pass { "pass" } else { "fail" });
    }

    let opts = Options::modular(20, 7);
    for name in ["BAB^T", "BAC^T", "theta", "BA^-TB^T"] {
        let c = map_case(name, 3, QCase::II)?;
        let r = poisson_map_check(&c.source, &c.images, &c.target, MapMode::Auto, &opts)?;
        println!("map {name:<10} N=3 sign {:?} (expected {:?})", r.sign, c.expected);
    }
    Ok(())
}
