//! Nerves of small categories and the homotopy category of a quasi-category.

use qcat::category::{find_isomorphism, nerve};
use qcat::corpus::span3;
use qcat::homotopy::iso_classes;
use qcat::horn::verify_quasi_category;
use qcat::sset::e_space;
use std::sync::Arc;

fn main() -> qcat::Result<()> {
    let c = span3();
    let x = Arc::new(nerve(&c, 4)?);
    println!("nerve of span3: level sizes {:?}", x.level_sizes());
    println!("coskeletal in degree {:?}", x.coskeletal_dim());

    let q = verify_quasi_category(&x, 3)?;
    let ho = q.ho()?;
    println!("ho has {} objects, {} morphisms", ho.base.num_objects(), ho.base.num_morphisms());
    println!("ho is isomorphic to span3: {}", find_isomorphism(&ho.base, &c).is_some());

    let e = Arc::new(e_space(&["a", "b", "c"], 4)?);
    let q = verify_quasi_category(&e, 3)?;
    println!("E on three points has {} iso class", iso_classes(q.ho()?).len());
    Ok(())
}
