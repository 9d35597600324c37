//! Generator brackets of the AB(ii) algebra at N = 2 and the classical r-matrix.

use bilinear_poisson::poisson::{AlgebraSpec, PoissonAlgebra};
use bilinear_poisson::ring::Poly;
use bilinear_poisson::tensor::{classical_r, QCase};

fn main() -> bilinear_poisson::Result<()> {
    let r = classical_r(2);
    println!("nonzero entries of r (N = 2):");
    for (row, col, v) in r.nonzeros() {
        println!("  r[{row}, {col}] = {v}");
    }

    let alg = PoissonAlgebra::build(&AlgebraSpec::ab(2, QCase::II))?;
    let gens = [alg.var("A", 0, 0), alg.var("A", 0, 1), alg.var("B", 0, 0), alg.var("B", 1, 0)];
    for (k, &x) in gens.iter().enumerate() {
        for &y in &gens[k + 1..] {
            let b = alg.bracket(&Poly::var(x), &Poly::var(y));
            println!("{{{}, {}}} = {}", alg.display(&Poly::var(x)), alg.display(&Poly::var(y)), alg.display(&b));
        }
    }
    Ok(())
}
