//! Run a small scenario in process and print the JSON report.

use bilinear_poisson::cli::{run_scenario, Scenario};

const SCENARIO: &str = r#"
name = "example"
seed = 3

[[checks]]
id = "jacobi"
algebra = { family = "AB", q = "iii", n = 2 }

[[checks]]
id = "identity"
entry = "R-perm"
n = 2

[[checks]]
id = "rank"
algebra = { family = "A", n = 3 }
corank = 3
"#;

fn main() -> bilinear_poisson::Result<()> {
    let scn = Scenario::parse(SCENARIO)?;
    let report = run_scenario(&scn, 0)?;
    print!("{}", report.to_json());
    std::process::exit(if report.all_matched() { 0 } else { 1 });
}
