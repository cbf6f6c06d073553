//! Inner fibrancy, quasi-isomorphisms, special outer horns and J(X).

use qcat::corpus::category;
use qcat::category::nerve;
use qcat::horn::{
    is_inner_fibrant_up_to, j_subcomplex, quasi_iso, special_horn_lift, verify_quasi_category, Ambient, Fibrancy,
    HornInstance, QuasiIsoMode,
};
use qcat::sset::boundary_trunc;
use std::sync::Arc;

fn main() -> qcat::Result<()> {
    let hollow = Arc::new(boundary_trunc(2, 3)?);
    if let Fibrancy::Failure(h) = is_inner_fibrant_up_to(&hollow, 3)? {
        println!("hollow triangle: unfillable horn {}", h.to_json());
    }

    let c = category("groupoid2")?;
    let x = Arc::new(nerve(&c, 5)?);
    let q = verify_quasi_category(&x, 4)?;
    for mode in [QuasiIsoMode::Providers, QuasiIsoMode::Sk2E1, QuasiIsoMode::Ho] {
        let e = x.find_at(1, "pq")?;
        println!("pq under {mode:?}: {}", quasi_iso(Ambient::Verified(&q), e, mode)?.label());
    }

    // Lambda^2_0 with faces d1 = pp (the composite) and d2 = pq
    let (pq, pp) = (x.find_at(1, "pq")?, x.find_at(1, "pp")?);
    let h = HornInstance::from_faces(&x, 2, 0, &[0, pp, pq])?;
    match special_horn_lift(Ambient::Verified(&q), &h, None)? {
        Some(s) => println!("special horn filled by {}", x.id(2, s)),
        None => println!("no filler"),
    }

    let span = Arc::new(nerve(&category("span3")?, 4)?);
    let (j, _) = j_subcomplex(&verify_quasi_category(&span, 3)?)?;
    println!("J(nerve span3) level sizes {:?}", j.level_sizes());
    Ok(())
}
