//! Coefficients `c_ab(k,m)` and `γ(k,m)` of the `C̃`-invariants `w_km`.
//!
//! Labels `(k, m)` satisfy `1 ≤ k ≤ K−1`, `k ≤ m ≤ K` with `K = ℓ + 1/2`.
//! The production path is a memoized first-step recursion; [`coeff_c_paths`]
//! recomputes the same numbers by walking every root-to-node path of the
//! rooted tree and is kept as an independent oracle.

use std::collections::{BTreeMap, HashMap};
use std::fmt;

use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use crate::arith::{b_ell, binomial, factorial, lambda_k, rat_int, rat_text, HalfInt, Rat};
use crate::error::{Error, Result};

/// A vertex label `w_km` of the rooted tree.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct NodeLabel {
    pub k: u32,
    pub m: u32,
}

impl NodeLabel {
    pub fn new(k: u32, m: u32, ell: HalfInt) -> Result<Self> {
        let l = NodeLabel { k, m };
        if l.is_valid(ell) {
            Ok(l)
        } else {
            Err(Error::InvalidLabel {
                k: k as i64,
                m: m as i64,
                ell: ell.to_string(),
            })
        }
    }

    pub fn is_valid(self, ell: HalfInt) -> bool {
        let kk = ell.k();
        self.k >= 1 && self.k < kk && self.k <= self.m && self.m <= kk
    }

    /// The unique label without children, `(K−1, K)`.
    pub fn leaf(ell: HalfInt) -> Self {
        NodeLabel {
            k: ell.k() - 1,
            m: ell.k(),
        }
    }

    /// Power of `φ_KK` in the trailing term, `2ℓ + 2 − k − m`.
    pub fn weight(self, ell: HalfInt) -> u32 {
        ell.twice() + 2 - self.k - self.m
    }
}

impl fmt::Display for NodeLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "w_{}{}", self.k, self.m)
    }
}

/// Every valid label, ordered by descending `k + m` (leaf first), then by `k`.
pub fn all_labels(ell: HalfInt) -> Vec<NodeLabel> {
    let kk = ell.k();
    let mut out: Vec<NodeLabel> = (1..kk)
        .flat_map(|k| (k..=kk).map(move |m| NodeLabel { k, m }))
        .collect();
    out.sort_by_key(|l| (std::cmp::Reverse(l.k + l.m), l.k));
    out
}

fn lam(k: u32, ell: HalfInt) -> Rat {
    lambda_k(k as i64, ell).expect("label indices lie in 1..=2ℓ")
}

/// Children of a vertex with their edge weights.
pub fn children(label: NodeLabel, ell: HalfInt) -> Result<Vec<(NodeLabel, Rat)>> {
    let label = NodeLabel::new(label.k, label.m, ell)?;
    let kk = ell.k();
    let b = b_ell(ell);
    let NodeLabel { k, m } = label;
    Ok(if label == NodeLabel::leaf(ell) {
        vec![]
    } else if k == m {
        vec![(NodeLabel { k, m: k + 1 }, rat_int(2) * lam(k, ell) / &b)]
    } else if m == kk {
        vec![(NodeLabel { k: k + 1, m }, lam(k, ell) / &b)]
    } else {
        vec![
            (NodeLabel { k: k + 1, m }, lam(k, ell) / &b),
            (NodeLabel { k, m: m + 1 }, lam(m, ell) / &b),
        ]
    })
}

/// Height of the tree rooted at `label`.
pub fn tree_height(label: NodeLabel, ell: HalfInt) -> Result<u32> {
    let ch = children(label, ell)?;
    let mut h = 0;
    for (c, _) in ch {
        h = h.max(1 + tree_height(c, ell)?);
    }
    Ok(h)
}

/// Memo for the recursion; one per `ℓ`.
struct Recursion {
    ell: HalfInt,
    b: Rat,
    c: HashMap<(u32, u32, u32, u32), Rat>,
    gamma: HashMap<(u32, u32), Rat>,
}

impl Recursion {
    fn new(ell: HalfInt) -> Self {
        Recursion {
            ell,
            b: b_ell(ell),
            c: HashMap::new(),
            gamma: HashMap::new(),
        }
    }

    fn valid(&self, k: i64, m: i64) -> bool {
        k >= 1 && m >= 0 && NodeLabel { k: k as u32, m: m as u32 }.is_valid(self.ell)
    }

    fn c(&mut self, k: i64, m: i64, a: i64, b: i64) -> Rat {
        if a < 0 || b < 0 || !self.valid(k, m) || !self.valid(k + a, m + b) {
            return Rat::zero();
        }
        if a == 0 && b == 0 {
            return Rat::one();
        }
        let key = (k as u32, m as u32, a as u32, b as u32);
        if let Some(v) = self.c.get(&key) {
            return v.clone();
        }
        let kk = self.ell.k() as i64;
        let lk = lam(k as u32, self.ell) / &self.b;
        let v = if k == m {
            rat_int(2) * lk * self.c(k, k + 1, a, b - 1)
        } else if m == kk {
            lk * self.c(k + 1, m, a - 1, b)
        } else {
            let lm = lam(m as u32, self.ell) / &self.b;
            lk * self.c(k + 1, m, a - 1, b) + lm * self.c(k, m + 1, a, b - 1)
        };
        self.c.insert(key, v.clone());
        v
    }

    fn gamma(&mut self, k: i64, m: i64) -> Rat {
        if !self.valid(k, m) {
            return Rat::zero();
        }
        let leaf = NodeLabel::leaf(self.ell);
        if (k as u32, m as u32) == (leaf.k, leaf.m) {
            return lam(leaf.k, self.ell) / &self.b;
        }
        let key = (k as u32, m as u32);
        if let Some(v) = self.gamma.get(&key) {
            return v.clone();
        }
        let kk = self.ell.k() as i64;
        let lk = lam(k as u32, self.ell) / &self.b;
        let v = if k == m {
            rat_int(2) * lk * self.gamma(k, k + 1)
        } else if m == kk {
            lk * self.gamma(k + 1, m)
        } else {
            let lm = lam(m as u32, self.ell) / &self.b;
            lk * self.gamma(k + 1, m) + lm * self.gamma(k, m + 1)
        };
        self.gamma.insert(key, v.clone());
        v
    }
}

/// `c_ab(k,m)` by the memoized recursion; zero when `(k+a, m+b)` is not a label.
pub fn coeff_c_recursive(k: u32, m: u32, a: u32, b: u32, ell: HalfInt) -> Result<Rat> {
    NodeLabel::new(k, m, ell)?;
    Ok(Recursion::new(ell).c(k as i64, m as i64, a as i64, b as i64))
}

/// `γ(k,m)` by the memoized recursion.
pub fn coeff_gamma_recursive(k: u32, m: u32, ell: HalfInt) -> Result<Rat> {
    NodeLabel::new(k, m, ell)?;
    Ok(Recursion::new(ell).gamma(k as i64, m as i64))
}

/// Sum of edge-weight products over every path from the root to each reachable label.
pub fn path_sums(root: NodeLabel, ell: HalfInt) -> Result<BTreeMap<NodeLabel, Rat>> {
    let mut acc: BTreeMap<NodeLabel, Rat> = BTreeMap::new();
    let mut stack = vec![(NodeLabel::new(root.k, root.m, ell)?, Rat::one())];
    while let Some((node, w)) = stack.pop() {
        for (child, edge) in children(node, ell)? {
            stack.push((child, &w * &edge));
        }
        *acc.entry(node).or_insert_with(Rat::zero) += w;
    }
    Ok(acc)
}

/// `c_ab(k,m)` by explicit path enumeration (test oracle, exponential cost).
pub fn coeff_c_paths(k: u32, m: u32, a: u32, b: u32, ell: HalfInt) -> Result<Rat> {
    let sums = path_sums(NodeLabel::new(k, m, ell)?, ell)?;
    Ok(sums
        .get(&NodeLabel { k: k + a, m: m + b })
        .cloned()
        .unwrap_or_else(Rat::zero))
}

/// `γ(k,m)` from path enumeration: leaf weight times the path sum to the leaf.
pub fn coeff_gamma_paths(k: u32, m: u32, ell: HalfInt) -> Result<Rat> {
    let leaf = NodeLabel::leaf(ell);
    let to_leaf = coeff_c_paths(k, m, leaf.k - k, leaf.m - m, ell)?;
    Ok(lam(leaf.k, ell) / b_ell(ell) * to_leaf)
}

/// Chain coefficients of `w_{k,K}` in closed binomial form.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ChainForm {
    pub k: u32,
    /// `(n, binom(2ℓ+1−k, n) / b^n)`: coefficient of `w_{k+n,K} φ_KK^n`.
    pub chain: Vec<(u32, Rat)>,
    /// Coefficient of `φ_KK^{K+1−k}`: `binom(2ℓ+1−k, K) / (b^{K−k} (K+1−k))`.
    pub trailing: Rat,
    pub trailing_power: u32,
}

/// The binomial closed form for the chain `w_{k,K}`.
pub fn corollary_closed_form(k: u32, ell: HalfInt) -> Result<ChainForm> {
    let kk = ell.k();
    NodeLabel::new(k, kk, ell)?;
    let top = ell.twice() + 1 - k;
    let b = b_ell(ell);
    let b_pow = |n: u32| (0..n).fold(Rat::one(), |acc, _| acc * &b);
    let chain = (1..=(kk - 1 - k))
        .map(|n| (n, Rat::from_integer(binomial(top, n as i64)) / b_pow(n)))
        .collect();
    let trailing = Rat::from_integer(binomial(top, kk as i64)) / (b_pow(kk - k) * rat_int((kk + 1 - k) as i64));
    Ok(ChainForm {
        k,
        chain,
        trailing,
        trailing_power: kk + 1 - k,
    })
}

/// All `c_ab(k,m)` with `a + b ≥ 1` and every `γ(k,m)` for one `ℓ`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CoeffTable {
    ell: HalfInt,
    c: BTreeMap<(u32, u32, u32, u32), Rat>,
    gamma: BTreeMap<(u32, u32), Rat>,
}

impl CoeffTable {
    pub fn build(ell: HalfInt) -> Self {
        let mut rec = Recursion::new(ell);
        let mut c = BTreeMap::new();
        let mut gamma = BTreeMap::new();
        let labels = all_labels(ell);
        for &root in &labels {
            for &target in &labels {
                if target.k < root.k || target.m < root.m || target == root {
                    continue;
                }
                let (a, b) = (target.k - root.k, target.m - root.m);
                let v = rec.c(root.k as i64, root.m as i64, a as i64, b as i64);
                if !v.is_zero() {
                    c.insert((root.k, root.m, a, b), v);
                }
            }
            gamma.insert((root.k, root.m), rec.gamma(root.k as i64, root.m as i64));
        }
        CoeffTable { ell, c, gamma }
    }

    pub fn ell(&self) -> HalfInt {
        self.ell
    }

    /// `c_ab(k,m)`, zero when absent.
    pub fn c(&self, k: u32, m: u32, a: u32, b: u32) -> Rat {
        self.c.get(&(k, m, a, b)).cloned().unwrap_or_else(Rat::zero)
    }

    pub fn gamma(&self, k: u32, m: u32) -> Rat {
        self.gamma.get(&(k, m)).cloned().unwrap_or_else(Rat::zero)
    }

    /// Nonzero `c` entries as `((k, m, a, b), value)`.
    pub fn c_entries(&self) -> impl Iterator<Item = (&(u32, u32, u32, u32), &Rat)> {
        self.c.iter()
    }

    pub fn gamma_entries(&self) -> impl Iterator<Item = (&(u32, u32), &Rat)> {
        self.gamma.iter()
    }

    /// Terms `(a, b, c_ab(k,m))` of the sum for `w_km`.
    pub fn terms_for(&self, label: NodeLabel) -> Vec<(u32, u32, Rat)> {
        self.c
            .range((label.k, label.m, 0, 0)..=(label.k, label.m, u32::MAX, u32::MAX))
            .map(|(&(_, _, a, b), v)| (a, b, v.clone()))
            .collect()
    }

    /// `{"c": [{"k","m","a","b","value"}], "gamma": [{"k","m","value"}]}`.
    pub fn to_json(&self) -> Value {
        let c: Vec<Value> = self
            .c
            .iter()
            .map(|(&(k, m, a, b), v)| json!({"k": k, "m": m, "a": a, "b": b, "value": rat_text(v)}))
            .collect();
        let g: Vec<Value> = self
            .gamma
            .iter()
            .map(|(&(k, m), v)| json!({"k": k, "m": m, "value": rat_text(v)}))
            .collect();
        json!({"ell": self.ell.to_string(), "c": c, "gamma": g})
    }

    /// Plain-text listing, one coefficient per line.
    pub fn to_text(&self) -> String {
        let mut out = format!("coefficients for ell = {}\n", self.ell);
        for (&(k, m, a, b), v) in &self.c {
            out.push_str(&format!("c_{a}{b}({k},{m}) = {}\n", rat_text(v)));
        }
        for (&(k, m), v) in &self.gamma {
            out.push_str(&format!("gamma({k},{m}) = {}\n", rat_text(v)));
        }
        out
    }
}

/// `n!` as a rational.
pub(crate) fn fact_rat(n: u32) -> Rat {
    Rat::from_integer(factorial(n))
}
