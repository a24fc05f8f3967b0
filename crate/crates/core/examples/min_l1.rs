//! Minimal L1 representations: the two-generator closed form, the general
//! branch-and-bound, and the brute-force oracle they are checked against.

use coprime_metric::{brute_force_min_l1, ext_gcd, fib, min_l1_general, min_l1_two, Generators};
use num_bigint::BigUint;

fn big(v: u64) -> BigUint {
    BigUint::from(v)
}

fn main() {
    let (g, x, y) = ext_gcd(&big(5), &big(8));
    println!("ext_gcd(5, 8) = {g} = 5·({x}) + 8·({y})");

    let q = min_l1_two(&big(5), &big(8), &big(1)).unwrap();
    println!("q_{{5,8}}(1) = {} via {:?}", q.value, q.witness.coeffs.iter().map(ToString::to_string).collect::<Vec<_>>());

    let gens = Generators::from_u64s(&[6, 10, 15]).unwrap();
    for m in [1, 7, 29, 100] {
        let fast = min_l1_general(&gens, &big(m)).unwrap();
        let slow = brute_force_min_l1(&gens, &big(m), 60).unwrap();
        assert_eq!(fast.value, slow.value);
        println!("q_{{6,10,15}}({m}) = {}", fast.value);
    }

    let n1 = fib(150).to_biguint().unwrap();
    let n2 = fib(151).to_biguint().unwrap();
    let target = fib(200).to_biguint().unwrap();
    let q = min_l1_two(&n1, &n2, &target).unwrap();
    println!("q_{{F150,F151}}(F200) = {}", q.value);

    match min_l1_general(&Generators::from_u64s(&[4, 6]).unwrap(), &big(3)) {
        Ok(_) => unreachable!(),
        Err(e) => println!("{{4,6}} and 3: {e}"),
    }
}
