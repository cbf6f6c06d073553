//! Integral homology by Smith normal form.

use qcat::category::nerve;
use qcat::corpus::category;
use qcat::homology::{homology, pi0};
use qcat::sset::{boundary, e_space};

fn main() -> qcat::Result<()> {
    let show = |name: &str, x: &qcat::sset::SSet, m: usize| -> qcat::Result<()> {
        let h = homology(x, m)?;
        let gs: Vec<String> = h.groups.iter().map(|g| g.to_string()).collect();
        println!("{name:<14} pi0 {}  H = [{}]", pi0(x).len(), gs.join(", "));
        Ok(())
    };
    show("boundary(3)", &boundary(3), 3)?;
    show("B(Z/2)", &nerve(&category("z2")?, 6)?, 5)?;
    show("E^1", &e_space(&["0", "1"], 6)?, 5)?;
    Ok(())
}
