//! Seeded audit of the metric axioms over random coprime tuples.

use coprime_metric::audit::{run_audit, AuditConfig};

fn main() {
    for config in [
        AuditConfig { samples: 300, max_value: 60, ell: 2, seed: 42 },
        AuditConfig { samples: 100, max_value: 30, ell: 3, seed: 7 },
    ] {
        let report = run_audit(config);
        let t = &report.tallies;
        println!(
            "ell={} samples={}: submultiplicativity {}/{} triangle {}/{} symmetry {}/{} identity {}/{} membership {}/{}",
            config.ell,
            config.samples,
            t.submultiplicativity.checked - t.submultiplicativity.violations,
            t.submultiplicativity.checked,
            t.triangle.checked - t.triangle.violations,
            t.triangle.checked,
            t.symmetry.checked - t.symmetry.violations,
            t.symmetry.checked,
            t.identity.checked - t.identity.violations,
            t.identity.checked,
            t.membership.checked - t.membership.violations,
            t.membership.checked,
        );
        for c in &report.counterexamples {
            println!("  sample {}: {} {}", c.sample, c.property, c.detail);
        }
    }
}
