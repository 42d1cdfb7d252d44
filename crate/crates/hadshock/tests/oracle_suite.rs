use hadshock::oracle::{run_suite, VerifyConfig};

#[test]
fn suite_passes_on_fixed_seed() {
    let rep = run_suite(&VerifyConfig { seed: 7, scenarios: 40, dims: vec![2, 3, 4] }).unwrap();
    for (name, st) in &rep.identities {
        println!("{name:36} worst {:10.3e} tol {:8.1e} n {:4} {}", st.worst, st.tolerance, st.samples, st.passed);
    }
    for f in &rep.failures {
        println!("failure: {f}");
    }
    assert!(rep.passed);
}
