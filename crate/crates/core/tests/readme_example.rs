use qjoule::decompose::{wht_decompose, BranchSpec};
use qjoule::energetics::energy_report;
use qjoule::gates::{standard_gate, GateKind, GateSpec};
use qjoule::tol;

#[test]
fn readme_example_compiles_and_holds() {
    let cx = standard_gate(&GateSpec::simple(GateKind::Cx, vec![0, 1])).unwrap();
    let branch = BranchSpec::principal(4);
    let terms = wht_decompose(&cx, &branch).unwrap();
    let multiset = terms.coefficient_multiset(tol::ZERO_COEFF);

    assert_eq!(multiset.values().len(), 4);

    let report = energy_report("CX", &multiset, &branch, 1.0, 0.01, 1.0);
    assert!(report.shared_bound.unwrap() > 0.0);
}
