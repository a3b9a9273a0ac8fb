use std::fmt;

use serde::{Deserialize, Serialize};

use crate::scalar::Variable;

/// One coordinate of second-order jet space over `t = x_0, x_1, …, x_K`.
///
/// The derived ordering is the canonical coordinate order
/// `t < x_1 < … < x_K < U < U_0 < … < U_K < U_00 < U_01 < … < U_KK`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum JetCoord {
    X(u8),
    U,
    U1(u8),
    /// Always stored with the first index not exceeding the second.
    U2(u8, u8),
}

impl JetCoord {
    pub const T: JetCoord = JetCoord::X(0);

    /// Second derivative coordinate with the indices sorted.
    pub fn u2(a: u8, b: u8) -> JetCoord {
        if a <= b {
            JetCoord::U2(a, b)
        } else {
            JetCoord::U2(b, a)
        }
    }

    /// Largest index carried by the coordinate, if any.
    pub fn max_index(self) -> Option<u8> {
        match self {
            JetCoord::X(i) | JetCoord::U1(i) => Some(i),
            JetCoord::U2(_, j) => Some(j),
            JetCoord::U => None,
        }
    }

    pub fn is_derivative(self) -> bool {
        matches!(self, JetCoord::U1(_) | JetCoord::U2(..))
    }

    /// Every coordinate of the jet space with `K` spatial variables, in canonical order.
    pub fn all(k: u8) -> Vec<JetCoord> {
        let mut out: Vec<JetCoord> = (0..=k).map(JetCoord::X).collect();
        out.push(JetCoord::U);
        out.extend((0..=k).map(JetCoord::U1));
        for a in 0..=k {
            for b in a..=k {
                out.push(JetCoord::U2(a, b));
            }
        }
        out
    }
}

impl Variable for JetCoord {
    fn grade(&self) -> i64 {
        match self {
            JetCoord::X(_) | JetCoord::U => 0,
            JetCoord::U1(_) => 1,
            JetCoord::U2(..) => 2,
        }
    }

    fn text_name(&self) -> String {
        match *self {
            JetCoord::X(0) => "t".to_string(),
            JetCoord::X(i) => format!("x{i}"),
            JetCoord::U => "u".to_string(),
            JetCoord::U1(i) if i < 10 => format!("u_{i}"),
            JetCoord::U1(i) => format!("u_{{{i}}}"),
            JetCoord::U2(a, b) if b < 10 => format!("u_{a}{b}"),
            JetCoord::U2(a, b) => format!("u_{{{a},{b}}}"),
        }
    }

    fn latex_name(&self) -> String {
        match *self {
            JetCoord::X(0) => "t".to_string(),
            JetCoord::X(i) => format!("x_{{{i}}}"),
            JetCoord::U => "U".to_string(),
            JetCoord::U1(i) => format!("U_{{{i}}}"),
            JetCoord::U2(a, b) if b < 10 => format!("U_{{{a}{b}}}"),
            JetCoord::U2(a, b) => format!("U_{{{a},{b}}}"),
        }
    }
}

impl fmt::Display for JetCoord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.text_name())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn canonical_order() {
        let all = JetCoord::all(2);
        let mut sorted = all.clone();
        sorted.sort();
        assert_eq!(all, sorted);
        assert_eq!(all.len(), 3 + 1 + 3 + 6);
        assert!(JetCoord::X(2) < JetCoord::U);
        assert!(JetCoord::U < JetCoord::U1(0));
        assert!(JetCoord::U1(2) < JetCoord::U2(0, 0));
    }

    #[test]
    fn names() {
        assert_eq!(JetCoord::T.text_name(), "t");
        assert_eq!(JetCoord::u2(2, 0).text_name(), "u_02");
        assert_eq!(JetCoord::U2(3, 12).text_name(), "u_{3,12}");
        assert_eq!(JetCoord::X(3).latex_name(), "x_{3}");
        assert_eq!(JetCoord::U1(1).latex_name(), "U_{1}");
    }
}
