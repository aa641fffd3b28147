use std::path::PathBuf;

use convexity_core::verifier::{run_definition_file, ScenarioDefinition, Value};
use convexity_core::Error;

fn scenario(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR"))
        .join("../../scenarios")
        .join(name)
}

#[test]
fn shipped_files_pass() {
    for name in ["order_three.def", "quadratic_magnitude.def", "measures.def"] {
        let report = run_definition_file(&scenario(name)).unwrap();
        assert!(report.all_pass(), "{name}: {report:#?}");
        assert!(report.claims.iter().all(|c| c.expected.is_some()), "{name}");
    }
}

#[test]
fn order_three_file_gives_minus_one() {
    let report = run_definition_file(&scenario("order_three.def")).unwrap();
    let forward = report
        .claims
        .iter()
        .find(|c| c.statement.contains("forward-diff"))
        .unwrap();
    assert_eq!(forward.computed, Value::int(-1));
}

#[test]
fn errors_surface_from_files() {
    assert!(matches!(
        run_definition_file(&scenario("missing.def")),
        Err(Error::Io(_))
    ));
    let src = std::fs::read_to_string(scenario("order_three.def")).unwrap();
    let broken = src.replace("function pospartpow 3 of a", "function pospartpow 3 of b");
    assert!(matches!(
        ScenarioDefinition::parse(&broken),
        Err(Error::Parse { line: 12, .. })
    ));
    let undeclared = src.replace(
        "[h1, h2, h3, h4] expect -1\neval closed",
        "[h1, h2, h3, h5] expect -1\neval closed",
    );
    assert!(matches!(
        ScenarioDefinition::parse(&undeclared),
        Err(Error::UnknownSymbol(_))
    ));
}
