//! Distances between coprime tuples in several bases.

use coprime_metric::{distance, rebase, Base, CoprimeTuple, SeqParam};

fn main() {
    let a = CoprimeTuple::from_u64s(&[2, 3]).unwrap();
    let b = CoprimeTuple::from_u64s(&[5, 8]).unwrap();
    let c = CoprimeTuple::from_u64s(&[7, 11, 13]).unwrap();

    let d = distance(&a, &b, Base::Golden).unwrap();
    println!("d({a}, {b}): q_b(a)={} q_a(b)={} max_q={} d_φ={}", d.q_by_second, d.q_by_first, d.max_q, d.log_value);

    for base in [Base::Metallic(SeqParam::new(2).unwrap()), Base::e(), Base::real(10.0).unwrap()] {
        println!("  in base {base}: {}", rebase(&d, base).unwrap().log_value);
    }

    let ac = distance(&a, &c, Base::Golden).unwrap();
    let bc = distance(&b, &c, Base::Golden).unwrap();
    println!(
        "triangle: d(a,c)={:.6} ≤ d(a,b)+d(b,c)={:.6} (mixed cardinality: {})",
        ac.log_value,
        d.log_value + bc.log_value,
        bc.cross_cardinality
    );
}
