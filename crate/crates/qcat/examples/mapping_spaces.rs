//! Models of the mapping space between two vertices, and how they compare.

use qcat::category::nerve;
use qcat::corpus::category;
use qcat::equivalence::model_agreement;
use qcat::mapping::{cosimplicial_interval, hom_model, necklace_model, Model};
use std::sync::Arc;

fn main() -> qcat::Result<()> {
    for kind in Model::ALL {
        let c = cosimplicial_interval(kind, 2, 3)?;
        let sizes: Vec<_> = c.objects.iter().map(|o| o.nondegenerate_counts()).collect();
        println!("C_{kind}: {sizes:?}, audit {}", c.audit().holds);
    }

    let x = Arc::new(nerve(&category("z2")?, 6)?);
    for kind in Model::ALL {
        let h = hom_model(kind, &x, "x", "x", 3, 5)?;
        println!("Hom^{kind}(x, x): {:?}", h.set().level_sizes());
    }
    let nm = necklace_model(&x, "x", "x", 3, 2)?;
    println!("necklaces up to 3 vertices: {} objects, {:?}", nm.category.num_objects(), nm.set.level_sizes());

    let span = Arc::new(nerve(&category("span3")?, 4)?);
    let r = model_agreement(&span, "a", "c", 3, 5, 3)?;
    for m in &r.models {
        println!("{:>8}: pi0 {} acyclic {}", m.model, m.pi0, m.components_acyclic);
    }
    println!("agree: {}", r.agree);
    Ok(())
}
