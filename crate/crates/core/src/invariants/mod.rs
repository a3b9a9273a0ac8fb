//! Differential invariants of the prolonged algebra.
//!
//! At `ℓ = 3/2` the tower is `φ_i → w_i → ψ_i`; for `ℓ ≥ 5/2` it is
//! `φ_km, φ, w, w_0α, α_n, β_n → w_km → w_km / w^N`. The [`verify`] module
//! checks every annihilation and scaling statement exactly.

mod general;
mod tower32;
mod verify;

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::jet::{Jet, LaurentPoly};
use crate::scalar::Variable;
use crate::{Poly, Prolonged, Rat};

pub use general::{build_tower_general, expand_wkm_in_phi, wkm_jet_recursive, TowerGeneral};
pub use tower32::{build_tower_32, printed_tilde_c_32, PhiTower32, PsiTower32};
pub use verify::{build_tilde_c, printed_example_expansions, tilde_c_from, verify_full_annihilation, verify_intermediate_lemmas, verify_invariants};

/// The indeterminate `φ_km` (`k ≤ m`) of the reduced space.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct PhiVar {
    pub k: u8,
    pub m: u8,
}

impl PhiVar {
    /// Symmetric constructor: `φ_km = φ_mk`.
    pub fn new(k: u8, m: u8) -> Self {
        PhiVar { k: k.min(m), m: k.max(m) }
    }
}

impl Variable for PhiVar {
    fn grade(&self) -> i64 {
        1
    }

    fn text_name(&self) -> String {
        if self.m < 10 {
            format!("phi_{}{}", self.k, self.m)
        } else {
            format!("phi_{{{},{}}}", self.k, self.m)
        }
    }

    fn latex_name(&self) -> String {
        if self.m < 10 {
            format!("\\phi_{{{}{}}}", self.k, self.m)
        } else {
            format!("\\phi_{{{},{}}}", self.k, self.m)
        }
    }
}

impl fmt::Display for PhiVar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.text_name())
    }
}

/// Polynomial in the `φ_km`.
pub type PhiPoly = LaurentPoly<Rat, PhiVar>;

/// `φ_km = U_km/U − U_k U_m/U²` on the jet space.
pub fn phi_km_jet(jet: Jet, k: u8, m: u8) -> Poly {
    jet.u2(k, m).mul_ref(&jet.u_inv(1)) - jet.u1(k).mul_ref(&jet.u1(m)).mul_ref(&jet.u_inv(2))
}

/// `U_i / U`.
fn ratio_u(jet: Jet, i: u8) -> Poly {
    jet.u1(i).mul_ref(&jet.u_inv(1))
}

/// Operators paired with display names, in generator order.
fn named_ops(gens: &crate::cga::GeneratorSet) -> Vec<(String, Prolonged)> {
    gens.names()
        .iter()
        .zip(gens.prolonged_all())
        .map(|(n, p)| (n.to_string(), p.clone()))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn phi_var_names() {
        let v = PhiVar::new(3, 1);
        assert_eq!((v.k, v.m), (1, 3));
        assert_eq!(v.text_name(), "phi_13");
        assert_eq!(v.latex_name(), "\\phi_{13}");
        assert_eq!(PhiVar::new(2, 11).text_name(), "phi_{2,11}");
    }

    #[test]
    fn phi_km_symmetric() {
        let j = Jet::with_k(3);
        assert_eq!(phi_km_jet(j, 1, 3), phi_km_jet(j, 3, 1));
    }
}
