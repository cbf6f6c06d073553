//! Generating, replaying and corrupting anodyne certificates.

use qcat::anodyne::{gen_box_inner, gen_box_special, gen_spine_simplex, mutate, verify, Mutation};

fn main() -> qcat::Result<()> {
    for n in 1..=5 {
        let c = gen_spine_simplex(n)?;
        println!("spine_simplex({n}): {} steps, {}", c.steps.len(), verify(&c).to_json());
    }

    let c = gen_box_inner(3, 1, 2)?;
    println!("box_inner(3,1,2): {} steps, valid {}", c.steps.len(), verify(&c).is_valid());
    let broken = mutate(&c, Mutation::Drop(0));
    println!("without its first step: {}", verify(&broken).to_json());

    let c = gen_box_special(1, 3)?;
    println!("box_special(1,3): partial {} up to {}, valid {}", c.partial, c.verified_dim, verify(&c).is_valid());
    println!("{}", serde_json::to_string(&gen_spine_simplex(1)?.to_json()).unwrap());
    Ok(())
}
