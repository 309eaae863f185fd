use fracpot::inequalities::*;
use std::time::Instant;
fn main() {
    let cache = FieldCache::new();
    let settings = HarnessSettings::default();
    for name in ["hedberg", "adams", "lebesgue", "endpoint-logl"] {
        let t0 = Instant::now();
        let outcome = run_suite(name, 2, &settings, cache.clone()).unwrap();
        println!("suite {name}: {:?} -> {:?}", t0.elapsed(), outcome.overall());
        for r in &outcome.reports {
            println!("  {} [{:?}] s={} fitted {:.4} delta {:?}",
                r.check_id, r.verdict, r.config.s, r.fitted_constant,
                r.refinement_deltas.first().map(|d| format!("{:.2}%", d*100.0)));
            if r.verdict != Verdict::Pass { for n in &r.notes { println!("    note: {n}"); } }
        }
    }
}
