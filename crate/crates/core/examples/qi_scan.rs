//! Quasi-isometry scan of the Fibonacci embedding n ↦ {F_n, F_{n+1}}, plus a
//! Pell scan and a three-wide window, printing a few rows and the summary.

use coprime_metric::{embedding_point, qi_check_pair, qi_scan, EmbeddingSpec, SeqParam};

fn main() {
    let spec = EmbeddingSpec::fibonacci();
    println!("x(5) = {}, x(3) = {}", embedding_point(&spec, 5).unwrap(), embedding_point(&spec, 3).unwrap());
    let row = qi_check_pair(&spec, 3, 5).unwrap();
    println!("gap {} : max_q {} (lower {}, upper {})", row.index_gap, row.max_q, row.lower_ok, row.upper_ok);

    let specs = [
        EmbeddingSpec::fibonacci(),
        EmbeddingSpec::new(SeqParam::new(2).unwrap(), 2).unwrap(),
        EmbeddingSpec::new(SeqParam::FIBONACCI, 3).unwrap(),
    ];
    for spec in specs {
        let report = qi_scan(&spec, 15).unwrap();
        let worst = report.rows.iter().map(|r| r.log_display - r.index_gap as f64).fold(0f64, |a, b| a.max(b.abs()));
        println!(
            "k={} ell={}: {} pairs, all pass = {}, max |d - gap| = {worst:.4}",
            spec.k,
            spec.ell,
            report.rows.len(),
            report.all_pass
        );
    }

    // Outside the proven range the check still runs, but only on request.
    assert!(EmbeddingSpec::new(SeqParam::new(2).unwrap(), 3).is_err());
    let report = qi_scan(&EmbeddingSpec::experimental(SeqParam::new(2).unwrap(), 3).unwrap(), 10).unwrap();
    println!("experimental k=2 ell=3: {} failing rows", report.failures().count());
}
