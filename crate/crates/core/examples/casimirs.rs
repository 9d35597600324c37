//! Casimir families and bivector ranks.

use bilinear_poisson::casimir::{casimir_family, casimir_family_check};
use bilinear_poisson::poisson::checks::bivector_rank;
use bilinear_poisson::poisson::{AlgebraSpec, Options, PoissonAlgebra};
use bilinear_poisson::tensor::QCase;

fn main() -> bilinear_poisson::Result<()> {
    let opts = Options::modular(4, 11);
    for spec in [AlgebraSpec::a(3), AlgebraSpec::ab(2, QCase::II), AlgebraSpec::bc_chain(2, 2, QCase::III)] {
        let fam = casimir_family(&spec)?;
        let names: Vec<&str> = fam.members.iter().map(|(n, _)| n.as_str()).collect();
        let r = casimir_family_check(&spec, &opts)?;
        let alg = PoissonAlgebra::build(&spec)?;
        let rank = bivector_rank(&alg, &opts)?;
        println!(
            "{} N={}: {} members [{}], central: {}, rank {rank} of {}",
            spec.label(),
            spec.n,
            names.len(),
            names.join(" "),
            r.pass,
            alg.num_generators()
        );
    }
    Ok(())
}
