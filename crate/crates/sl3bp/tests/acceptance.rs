use num_complex::Complex64;

use sl3bp::verify::{
    check_automorphism_identities, check_counts, check_degenerations, check_fusion_oracles, check_galois,
    check_qhr_characters, check_reducer, check_rules, check_s_transform, check_unitarity, Check,
};

struct Criterion {
    id: u32,
    title: &'static str,
    checks: Vec<Check>,
    limits: Vec<(usize, f64)>,
}

impl Criterion {
    fn new(id: u32, title: &'static str) -> Self {
        Criterion { id, title, checks: Vec::new(), limits: Vec::new() }
    }

    fn push(&mut self, c: Check) -> &mut Self {
        self.checks.push(c);
        self
    }

    /// The most recent check must also finish within `secs`.
    fn within(&mut self, secs: f64) -> &mut Self {
        self.limits.push((self.checks.len() - 1, secs));
        self
    }

    fn report(&self) -> bool {
        let slow: Vec<String> = self
            .limits
            .iter()
            .filter(|(i, s)| self.checks[*i].seconds >= *s)
            .map(|(i, s)| format!("{} took {:.1}s (limit {s}s)", self.checks[*i].name, self.checks[*i].seconds))
            .collect();
        let ok = slow.is_empty() && self.checks.iter().all(|c| c.passed);
        println!("criterion {:>2} {}: {}", self.id, if ok { "PASS" } else { "FAIL" }, self.title);
        for c in &self.checks {
            println!("    {c}");
        }
        for s in &slow {
            println!("    too slow: {s}");
        }
        ok
    }
}

#[test]
fn acceptance() {
    let mut all = Vec::new();

    let mut c = Criterion::new(1, "exact unitarity and symmetry, u = 3, 5, 7");
    for u in [3, 5, 7] {
        c.push(check_unitarity(u, "wzw")).within(if u == 7 { 10.0 } else { f64::INFINITY });
        c.push(check_unitarity(u, "bp")).within(if u == 7 { 10.0 } else { f64::INFINITY });
    }
    all.push(c);

    let mut c = Criterion::new(2, "Galois relation on all pairs and permutation identity, u = 3, 5, 7");
    for u in [3, 5, 7] {
        c.push(check_galois(u));
    }
    all.push(c);

    let mut c = Criterion::new(3, "Verlinde (BP) = Verlinde (WZW) = Kac-Walton, ring axioms, u = 3..7");
    for u in 3..=7 {
        c.push(check_fusion_oracles(u)).within(if u == 7 { 60.0 } else { f64::INFINITY });
    }
    all.push(c);

    let mut c = Criterion::new(4, "S and T automorphism identities, u = 5, 7");
    for u in [5, 7] {
        c.push(check_automorphism_identities(u));
    }
    all.push(c);

    let mut c = Criterion::new(5, "reduced characters to order 15: positivity, top spaces, offsets, trivial model");
    for u in [3, 5, 7] {
        c.push(check_qhr_characters(u, 15));
    }
    all.push(c);

    let mut c = Criterion::new(6, "numeric S-transform ratios at u = 5, tau = i, order 25, tol 1e-8");
    let zetas = [Complex64::new(0.1, 0.0), Complex64::new(0.23, 0.0), Complex64::new(0.1, 0.05)];
    c.push(check_s_transform(5, Complex64::new(0.0, 1.0), &zetas, 25, 1e-8)).within(30.0);
    all.push(c);

    let mut c = Criterion::new(7, "symbolic Verlinde reduction reproduces the relaxed rule, u = 5");
    c.push(check_reducer(5, 6, 2024));
    all.push(c);

    let mut c = Criterion::new(8, "all Grothendieck rules via expansion, 5 instances each, with equivariances, u = 5");
    c.push(check_rules(5, 5, 2025));
    all.push(c);

    let mut c = Criterion::new(9, "completeness counts, u = 3, 5, 7, 9");
    for u in [3, 5, 7, 9] {
        c.push(check_counts(u));
    }
    all.push(c);

    let mut c = Criterion::new(10, "degeneration bookkeeping, u = 5, 7");
    for u in [5, 7] {
        c.push(check_degenerations(u, 8, 2026 + u as u64));
    }
    all.push(c);

    let failed: Vec<u32> = all.iter().filter(|c| !c.report()).map(|c| c.id).collect();
    assert!(failed.is_empty(), "failed criteria: {failed:?}");
}
