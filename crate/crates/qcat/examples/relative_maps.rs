//! Relative mapping spaces and the strict pullback on the square.

use qcat::category::nerve;
use qcat::corpus::category;
use qcat::mapping::{rel_map_space, relative_pullback_check, SquareConfig};
use qcat::sset::{delta_trunc, Idx, Subcomplex};
use std::sync::Arc;

fn main() -> qcat::Result<()> {
    let x = Arc::new(nerve(&category("span3")?, 4)?);

    // paths from a to c: maps Delta^1 -> X fixed on the endpoints
    let b = Arc::new(delta_trunc(1, 4)?);
    let ends = Subcomplex::from_ids(&b, &["0", "1"])?;
    let (a, c) = (x.find_at(0, "a")?, x.find_at(0, "c")?);
    let at = |q: usize, y: Idx| {
        let v = if b.vertex(q, y, 0) == 0 { a } else { c };
        x.apply_operator(0, v, &vec![0; q + 1])
    };
    let rel = rel_map_space(&b, &ends, &x, &at, 3, 5)?;
    println!("Map(Delta^1, X; a, c): {:?}", rel.set().level_sizes());

    // both ends of the square go to h
    let h = x.find_at(1, "h")?;
    let sq = SquareConfig::new(&x, h, h, 5)?;
    let rep = relative_pullback_check(&sq.base, &sq.a, &sq.s, &sq.t, &x, &|q, y| sq.f(q, y), 4, 5)?;
    println!("pullback holds: {} ({})", rep.holds, rep.detail);
    for (n, l) in rep.levels.iter().enumerate() {
        println!("  level {n}: {l:?}");
    }
    Ok(())
}
