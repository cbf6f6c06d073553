//! Testing maps of quasi-categories for DK-equivalence.

use qcat::category::{codiscrete, discrete, nerve, nerve_map, poset, Functor};
use qcat::equivalence::{dk_check, replay, Status};
use qcat::sset::{enumerate_maps, point, Constraints};
use std::sync::Arc;

fn main() -> qcat::Result<()> {
    let x = Arc::new(nerve(&poset(1), 5)?);
    let y = Arc::new(point().extend_to(5)?);
    let f = enumerate_maps(&x, &y, &Constraints::new())?.remove(0);
    let v = dk_check(&f, 3, 5)?;
    println!("[1] -> *: {}", serde_json::to_string(&v.status).unwrap());
    if let Status::Refuted { witness } = &v.status {
        println!("witness replays: {}", replay(&f, witness, 3, 5)?);
    }

    let g = codiscrete(&["p", "q"]);
    let t = discrete(&["*"]);
    let fun = Functor { obj: vec![0, 0], mor: vec![0; g.num_morphisms()] };
    let (ng, nt) = (Arc::new(nerve(&g, 5)?), Arc::new(nerve(&t, 5)?));
    let e = nerve_map(&fun, &ng, &nt, &g, &t)?;
    let v = dk_check(&e, 3, 5)?;
    println!("groupoid -> *: consistent {} over {} vertex pairs", v.is_consistent(), v.pairs.len());
    Ok(())
}
