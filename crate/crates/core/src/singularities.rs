//! Reid–Tai ages of finite cyclic diagonal actions.
//!
//! A generator of `Z/m` acts near a fixed component with eigenvalues
//! `zeta^w` for residues `w`; the element `g^k` then has age
//! `sum ((k w) mod m) / m`. Directions tangent to the fixed component carry
//! residue 0.

use std::fmt;

use num_bigint::BigInt;
use num_traits::Zero;
use thiserror::Error;

use crate::dynamics::restricted_degree;
use crate::exactalg::Rat;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SingError {
    #[error("group order must be at least 1")]
    ZeroOrder,
    #[error("weight {weight} is not a residue mod {order}")]
    WeightOutOfRange { weight: u64, order: u64 },
    #[error("the identity element has no pseudo-reflection type")]
    TrivialElement,
    #[error("precondition violated: {0}")]
    PreconditionViolated(String),
}

/// The element `g^k` of `Z/m` with the local residues of the generator.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct CyclicActionElement {
    order: u64,
    power: u64,
    weights: Vec<u64>,
}

impl CyclicActionElement {
    pub fn new(order: u64, power: u64, weights: Vec<u64>) -> Result<Self, SingError> {
        if order == 0 {
            return Err(SingError::ZeroOrder);
        }
        if let Some(&w) = weights.iter().find(|&&w| w >= order) {
            return Err(SingError::WeightOutOfRange { weight: w, order });
        }
        Ok(CyclicActionElement { order, power: power % order, weights })
    }

    pub fn order(&self) -> u64 {
        self.order
    }

    pub fn power(&self) -> u64 {
        self.power
    }

    pub fn weights(&self) -> &[u64] {
        &self.weights
    }

    /// Residues `(k w) mod m`.
    pub fn residues(&self) -> Vec<u64> {
        self.weights.iter().map(|&w| (self.power * w) % self.order).collect()
    }

    pub fn inverse(&self) -> Self {
        CyclicActionElement { power: (self.order - self.power) % self.order, ..self.clone() }
    }

    pub fn is_trivial(&self) -> bool {
        self.power == 0
    }
}

pub fn age(e: &CyclicActionElement) -> Rat {
    let total: u64 = e.residues().iter().sum();
    Rat::new(total.into(), e.order.into())
}

/// At most one nonzero residue: the fixed locus has codimension at most one.
pub fn is_pseudo_reflection(e: &CyclicActionElement) -> Result<bool, SingError> {
    if e.is_trivial() {
        return Err(SingError::TrivialElement);
    }
    Ok(e.residues().iter().filter(|&&r| r != 0).count() <= 1)
}

/// A fixed component of `g^k` on `P^{m-1}`: the projectivized eigenspace
/// spanned by the eigen-indices in `eigen_indices`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FixedComponent {
    pub eigen_indices: Vec<u64>,
    pub dim: usize,
    /// Local element at a point of the component: power `k`, weights
    /// `(i - j) mod m` for the other eigen-indices `i`.
    pub element: CyclicActionElement,
    /// Nonzero residues in normal directions.
    pub normal_residues: Vec<u64>,
    pub age: Rat,
    pub pseudo_reflection: bool,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PowerFixedData {
    pub power: u64,
    pub components: Vec<FixedComponent>,
}

/// Fixed loci of all nontrivial powers of the cyclic permutation of
/// coordinates on `P^{m-1}`.
///
/// The permutation is diagonal in the eigenbasis with eigenvalues `zeta^j`.
/// The power `g^k` fixes the projectivized sums of eigenspaces with equal
/// `k j mod m`; at such a component through eigen-index `j` the tangent
/// weight of direction `i` is `k (i - j) mod m`.
pub fn projective_cycle_fixed_data(m: u64) -> Result<Vec<PowerFixedData>, SingError> {
    if m < 2 {
        return Err(SingError::PreconditionViolated(format!("need m >= 2, got {m}")));
    }
    let mut table = Vec::new();
    for k in 1..m {
        let mut classes: Vec<Vec<u64>> = Vec::new();
        for c in 0..m {
            let class: Vec<u64> = (0..m).filter(|j| (k * j) % m == c).collect();
            if !class.is_empty() {
                classes.push(class);
            }
        }
        classes.sort();
        let components = classes
            .into_iter()
            .map(|class| {
                let j = class[0];
                let weights: Vec<u64> = (0..m).filter(|&i| i != j).map(|i| (i + m - j) % m).collect();
                let element = CyclicActionElement::new(m, k, weights).expect("residues are reduced");
                let normal_residues: Vec<u64> = element.residues().into_iter().filter(|&r| r != 0).collect();
                FixedComponent {
                    dim: class.len() - 1,
                    eigen_indices: class,
                    age: age(&element),
                    pseudo_reflection: is_pseudo_reflection(&element).expect("nontrivial power"),
                    normal_residues,
                    element,
                }
            })
            .collect();
        table.push(PowerFixedData { power: k, components });
    }
    Ok(table)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SingularityVerdict {
    Terminal,
    Canonical,
    Neither,
    Smooth,
}

impl fmt::Display for SingularityVerdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            SingularityVerdict::Terminal => "Terminal",
            SingularityVerdict::Canonical => "Canonical",
            SingularityVerdict::Neither => "Neither",
            SingularityVerdict::Smooth => "Smooth",
        };
        f.write_str(s)
    }
}

/// Age of one nontrivial element at one fixed component.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ComponentAge {
    pub power: u64,
    pub component: String,
    pub residues: Vec<u64>,
    pub age: Rat,
    pub pseudo_reflection: bool,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AgeReport {
    pub order: u64,
    pub entries: Vec<ComponentAge>,
    pub min_age_nontrivial: Option<Rat>,
    pub pseudo_reflection_found: bool,
    pub verdict: SingularityVerdict,
}

impl AgeReport {
    fn from_entries(order: u64, entries: Vec<ComponentAge>) -> Self {
        let min_age_nontrivial = entries.iter().map(|e| e.age.clone()).min();
        let pseudo_reflection_found = entries.iter().any(|e| e.pseudo_reflection);
        let one = Rat::from_integer(1.into());
        let verdict = match &min_age_nontrivial {
            None => SingularityVerdict::Smooth,
            Some(_) if pseudo_reflection_found => SingularityVerdict::Neither,
            Some(a) if *a > one => SingularityVerdict::Terminal,
            Some(a) if *a >= one => SingularityVerdict::Canonical,
            Some(_) => SingularityVerdict::Neither,
        };
        AgeReport { order, entries, min_age_nontrivial, pseudo_reflection_found, verdict }
    }
}

/// Ages of all nontrivial powers of a diagonal action with the given
/// generator weights at a single fixed point.
pub fn diagonal_action_report(order: u64, weights: &[u64]) -> Result<AgeReport, SingError> {
    CyclicActionElement::new(order, 1, weights.to_vec())?;
    let mut entries = Vec::new();
    for k in 1..order {
        let e = CyclicActionElement::new(order, k, weights.to_vec())?;
        if e.residues().iter().all(Zero::is_zero) {
            continue;
        }
        entries.push(ComponentAge {
            power: k,
            component: "origin".into(),
            residues: e.residues(),
            age: age(&e),
            pseudo_reflection: is_pseudo_reflection(&e)?,
        });
    }
    Ok(AgeReport::from_entries(order, entries))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum WindowTag {
    /// `m` is 4 or 6, where the projective quotient is known to be canonical.
    CanonicalWindow,
    OutsideCanonicalWindow,
}

/// Report on `X = (P^{m-1} x E^n) / (Z/m)` with the diagonal action.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct XuReport {
    pub m: u64,
    pub n: u64,
    pub r: u64,
    pub a_weights: Vec<u64>,
    pub ages: AgeReport,
    pub window: WindowTag,
    pub q: BigInt,
    pub dim_x: u64,
    pub deg_f: BigInt,
    /// Claims about `X` that are outside computational scope.
    pub reported_not_verified: Vec<String>,
}

/// Ages of the cyclic action on `P^{m-1} x E^n` by the coordinate cycle on
/// the first factor and `zeta^{a_i}` on the `i`-th elliptic factor, at every
/// fixed component of every nontrivial element, together with the degree
/// data of the endomorphism induced by multiplication by `r`.
pub fn ex_xu_verdict(m: u64, n: u64, r: u64, a_weights: &[u64]) -> Result<XuReport, SingError> {
    if r < 2 {
        return Err(SingError::PreconditionViolated(format!("need r >= 2, got {r}")));
    }
    let q = BigInt::from(r) * BigInt::from(r);
    let bad = |msg: String| Err(SingError::PreconditionViolated(msg));
    if m == 0 {
        return Err(SingError::ZeroOrder);
    }
    if a_weights.len() as u64 != n {
        return bad(format!("expected {n} weights, got {}", a_weights.len()));
    }
    if m == 1 {
        let dim_x = n;
        return Ok(XuReport {
            m,
            n,
            r,
            a_weights: a_weights.to_vec(),
            ages: AgeReport::from_entries(1, Vec::new()),
            window: WindowTag::OutsideCanonicalWindow,
            deg_f: restricted_degree(&q, dim_x as u32),
            q,
            dim_x,
            reported_not_verified: Vec::new(),
        });
    }
    if n == 0 || n >= m {
        return bad(format!("need 0 < n < m, got n = {n}, m = {m}"));
    }
    if let Some(&w) = a_weights.iter().find(|&&w| w == 0 || w >= m) {
        return bad(format!("weight {w} is not a nonzero residue mod {m}"));
    }

    let mut entries = Vec::new();
    for data in projective_cycle_fixed_data(m)? {
        let k = data.power;
        let abelian = CyclicActionElement::new(m, k, a_weights.to_vec())?;
        let abelian_residues = abelian.residues();
        for comp in &data.components {
            let mut residues = comp.element.residues();
            residues.extend(&abelian_residues);
            let nonzero = residues.iter().filter(|&&x| x != 0).count();
            entries.push(ComponentAge {
                power: k,
                component: format!("P-eigenspace {:?} x fixed point of E^{n}", comp.eigen_indices),
                age: &comp.age + age(&abelian),
                pseudo_reflection: nonzero <= 1,
                residues,
            });
        }
    }
    let dim_x = m + n - 1;
    Ok(XuReport {
        m,
        n,
        r,
        a_weights: a_weights.to_vec(),
        ages: AgeReport::from_entries(m, entries),
        window: if m == 4 || m == 6 { WindowTag::CanonicalWindow } else { WindowTag::OutsideCanonicalWindow },
        deg_f: restricted_degree(&q, dim_x as u32),
        q,
        dim_x,
        reported_not_verified: vec![
            format!("Iitaka dimension of -K_X equals m - 1 = {}", m - 1),
            format!("augmented irregularity of X equals n = {n}"),
        ],
    })
}
