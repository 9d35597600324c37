//! R-matrix identities, exchange rules and their semiclassical limit.

use bilinear_poisson::quantum::{check_identity, exchange_rules_from_relations, semiclassical_suite, Identification};
use bilinear_poisson::quantum::semiclassical::describe;

fn main() -> bilinear_poisson::Result<()> {
    for id in ["R-YB", "R-inverse", "R-perm", "R-perm-minus", "YB-MN"] {
        let o = check_identity(id, 2)?;
        println!("{id:<14} holds: {:<5} witness: {:?}", o.holds, o.witness);
    }

    let sys = exchange_rules_from_relations(2)?;
    println!("{} exchange rules, confluent: {}", sys.rules().count(), sys.check_confluent().is_ok());
    for ident in [Identification::Natural, Identification::TransposedA] {
        for r in semiclassical_suite(&sys, ident)? {
            println!("{} {:?}: {}", r.relation, ident, describe(&r.agreement));
        }
    }
    Ok(())
}
