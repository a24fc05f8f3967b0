//! k-Fibonacci tables, negative indices, and exact comparison against powers
//! of the metallic ratio.

use std::cmp::Ordering;

use coprime_metric::sequences::kfib_table;
use coprime_metric::{compare_power, fib, metallic, SeqParam};
use num_bigint::BigUint;

fn main() {
    println!("F_n for n in -6..=6:");
    for n in -6..=6 {
        print!("{} ", fib(n));
    }
    println!();

    for k in 1..=3 {
        let param = SeqParam::new(k).unwrap();
        let row: Vec<String> = kfib_table(param, 0, 8).unwrap().into_iter().map(|(_, v)| v.to_string()).collect();
        let ratio = metallic(param);
        println!("k={k} (ratio {:.9}): {}", ratio.value, row.join(" "));
    }

    println!("F_300 = {}", fib(300));

    // Where does 1000 sit between powers of the golden ratio?
    let q = BigUint::from(1000u32);
    let j = (0..).find(|&j| compare_power(&q, SeqParam::FIBONACCI, j) == Ordering::Less).unwrap();
    println!("φ^{} ≤ 1000 < φ^{}", j - 1, j);
}
