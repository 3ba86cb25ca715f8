//! The subgroup of squares in F_13, its cosets, and restricted sumsets of
//! a few small sets.

use rsl::subgroup::{char_sum, compute_subgroup};
use rsl::sumsets::{is_sidon, restricted_sumset, sumset};
use rsl::{make_field, ElemSet};

fn main() -> rsl::Result<()> {
    let f = make_field(13, 1)?;
    let s2 = compute_subgroup(&f, 2)?;
    println!("S_2 = {:?}", s2.members.to_vec());
    for (i, c) in s2.cosets(&f).iter().enumerate() {
        println!("coset {i}: {:?}", c.to_vec());
    }

    for a in [vec![0, 1, 3, 9], vec![0, 4, 10, 12], vec![1, 2, 3, 4]] {
        let set = ElemSet::from_indices(13, a.iter().copied());
        let r = restricted_sumset(&f, &set);
        println!(
            "A = {a:?}: A +^ A = {:?}, equals S_2: {}, sidon: {:?}",
            r.to_vec(),
            r == s2.members,
            is_sidon(&f, &set)
        );
        println!("  A + A = {:?}", sumset(&f, &set, &set).to_vec());
    }

    let a = ElemSet::from_indices(13, [0, 1, 3, 9]);
    let s = char_sum(&f, 2, &a)?;
    println!("quadratic character sum over {{0,1,3,9}}: {:.3} + {:.3}i", s.re, s.im);
    Ok(())
}
