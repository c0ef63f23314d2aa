//! Finite poset sites, presheaves, the Godement monad and its bar resolution.

pub mod monad;
pub mod presheaf;
pub mod site;

pub use monad::{
    alternating_complex, bar_construction, check_monad_laws, godement_monad, verify_cosimplicial,
    Cosimplicial, GodementMonad, IdentityMonad, Monad,
};
pub use presheaf::{Presheaf, PresheafMor};
pub use site::{posets_up_to_iso, FiniteSite};

use crate::error::Result;

/// Default depth for cosimplicial identity checks.
pub const DEFAULT_LEVELS: usize = 4;

/// `H^i(X, F)` for `i = 0..=#points`, from global sections of the Godement
/// resolution. Cohomology of a finite space vanishes above its height (the
/// length of its longest chain), so the resolution is only built that far and
/// higher degrees are reported as 0.
pub fn cohomology_via_godement(site: &FiniteSite, f: &Presheaf) -> Result<Vec<usize>> {
    f.check_sheaf(site)?;
    let top = site.num_points();
    let h = site.height();
    let g = godement_monad(site);
    let x = bar_construction(&g, f, h + 1)?;
    let whole = site.whole();
    let k = alternating_complex(&x, |p| p.dim(whole), |m| m.maps[whole].clone(), false)?;
    Ok((0..=top as i64)
        .map(|n| {
            if n as usize <= h {
                k.cohomology_dim(n)
            } else {
                0
            }
        })
        .collect())
}

/// For each point `x`, the augmented complex `F_x -> (G^{•+1}F)_x` is exact
/// through degree `levels - 1`; returns the first point where it is not.
pub fn stalkwise_exactness(
    site: &FiniteSite,
    f: &Presheaf,
    levels: usize,
) -> Result<Option<usize>> {
    let g = godement_monad(site);
    let x = bar_construction(&g, f, levels)?;
    for p in 0..site.num_points() {
        let u = site.minimal_open(p);
        let k = alternating_complex(&x, |o| o.dim(u), |m| m.maps[u].clone(), true)?;
        if (-1..levels as i64).any(|n| k.cohomology_dim(n) != 0) {
            return Ok(Some(p));
        }
    }
    Ok(None)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_sites() {
        let pt = FiniteSite::point();
        assert_eq!(
            cohomology_via_godement(&pt, &Presheaf::constant(&pt, 1)).unwrap(),
            vec![1, 0]
        );
        let s = FiniteSite::sierpinski();
        assert_eq!(
            cohomology_via_godement(&s, &Presheaf::constant(&s, 1)).unwrap(),
            vec![1, 0, 0]
        );
        let c = FiniteSite::pseudo_circle();
        let h = cohomology_via_godement(&c, &Presheaf::constant(&c, 1)).unwrap();
        assert_eq!(h, vec![1, 1, 0, 0, 0]);
        assert_eq!(
            stalkwise_exactness(&c, &Presheaf::constant(&c, 1), 3).unwrap(),
            None
        );
    }
}
