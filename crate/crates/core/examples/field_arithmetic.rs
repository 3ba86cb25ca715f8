//! Arithmetic in F_343 = F_7[x]/(m(x)). Elements are indexed by their
//! base-7 digits, constant term first.

use rsl::{make_field, Elem};

fn main() -> rsl::Result<()> {
    let f = make_field(7, 3)?;
    println!("q = {}, modulus {:?}, generator {}", f.q(), f.modulus(), f.generator().idx());

    let (a, b) = (Elem(100), Elem(250));
    println!("digits of a: {:?}, of b: {:?}", f.digits(a), f.digits(b));
    println!("a + b = {}", f.add(a, b).idx());
    println!("a * b = {}", f.mul(a, b).idx());
    println!("a^-1 = {}", f.inv(a)?.idx());
    println!("log_g(a) = {:?}, order(a) = {}", f.log(a)?, f.order(a));

    // x -> x^7 fixes exactly the prime field.
    let fixed: Vec<u64> = f.elements().filter(|&x| f.pow(x, 7) == x).map(Elem::idx).collect();
    println!("fixed points of Frobenius: {fixed:?}");
    Ok(())
}
