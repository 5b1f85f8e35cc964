#![no_main]

use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else {
        return;
    };
    if let Ok(cnf) = epostar::sat::parse_dimacs(text) {
        let again = epostar::sat::parse_dimacs(&cnf.to_dimacs()).expect("written CNF reparses");
        assert_eq!(again.clauses, cnf.clauses);
        if cnf.num_vars <= 64 && cnf.clauses.len() <= 256 {
            let _ = epostar::solver::solve(&cnf, &epostar::solver::Backend::Builtin, None)
                .expect("built-in models verify");
        }
    }
});
