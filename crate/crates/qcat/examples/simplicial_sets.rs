//! Simplices, horns, products and joins, and the normal form of a simplex.

use qcat::sset::{boundary, delta, delta_trunc, horn, isomorphic, join, product, to_json_string};

fn main() -> qcat::Result<()> {
    let d2 = delta(2);
    println!("Delta^2       nondegenerate {:?}", d2.nondegenerate_counts());
    println!("boundary(3)   nondegenerate {:?}", boundary(3).nondegenerate_counts());
    println!("horn(3, 1)    nondegenerate {:?}", horn(3, 1)?.nondegenerate_counts());

    let sq = product(&delta(1), &delta(1))?;
    println!("Delta^1 x Delta^1: {:?}", sq.nondegenerate_counts());
    for &t in &sq.nondegenerate(2) {
        println!("  triangle {}", sq.id(2, t));
    }

    let j = join(&delta(1), &delta(1))?;
    println!("Delta^1 * Delta^1 is Delta^3: {}", isomorphic(&j, &delta(3))?);

    // a degenerate 3-simplex of Delta^2, written as s_i applied to its root
    let x = d2.find_at(3, "0112")?;
    let nf = d2.normal_form(3, x);
    println!("0112 = {:?} applied to {}", nf.surjection, d2.id(nf.root_dim, nf.root));

    print!("{}", to_json_string(&delta_trunc(1, 1)?));
    Ok(())
}
