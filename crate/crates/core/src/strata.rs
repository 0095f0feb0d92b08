//! Bubble trees on `X = M / Z_alpha` and the dimensions of their strata.
//!
//! An [`OBubbleTree`] has a root carrying the background bundle type on `M`
//! and two kinds of non-root vertices:
//!
//! * free bubbles (`S^4`) attached at a point with trivial stabiliser, which
//!   lift to `alpha` copies upstairs;
//! * singular bubbles (`S^4 / Z_a`) forming at most one chain per singular
//!   point: the head sits at the cone point, each further link at the north
//!   pole of the previous one. They lift to `alpha / a` copies.
//!
//! Vertex `0` is the root; vertex `j + 1` is `vertices[j]`, and parents
//! always precede their children.
//!
//! ## Canonical encoding
//!
//! Root `R[c|m_1,m_2,...]` with its charge and weights, free vertices
//! `(w ...)` as in [`crate::bubble_tree`], singular vertices
//! `{i|k|m_in>m_out ...}`. Children follow their parent, sorted as strings.
//!
//! ## Dimensions
//!
//! Stratum dimensions are formal (index) dimensions:
//!
//! ```text
//! stratum = dim M^{O_0} + sum over free vertices   (4 + 8w - 8)
//!                       + sum over singular ones  (position + dim_s4 - 1)
//! ```
//!
//! where free points on any bubble contribute 4 positional dimensions and
//! cone points and north poles contribute none. Each edge carries invariant
//! gluing data of dimension 4 or 2, and for every tree
//! `dim M^O = stratum + dim Gl_T^O`. For one singular edge this is the four
//! case count `n''' = -4 + n' + n'' + dim(I) + 1`; beyond that it is checked
//! rather than proved, and reports mark chains longer than one link as
//! extrapolated.

use std::collections::BTreeSet;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::bubble_tree::BubbleTree;
use crate::equivariant_s4::{exists_invariant, S4Action, S4Triple};
use crate::index::{dim_invariant_moduli, invariant_index, require_integer, s4_index};
use crate::signature::{gluing_parameter_group, validate_bundle, BundleType, OrbifoldSignature};
use crate::{Error, Group, Rational, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Bubble {
    Free { weight: u64 },
    Singular { singularity: usize, weight: u64, m_in: u64, m_out: u64 },
}

impl Bubble {
    pub fn weight(&self) -> u64 {
        match *self {
            Bubble::Free { weight } | Bubble::Singular { weight, .. } => weight,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Attachment {
    ConePoint { singularity: usize },
    NorthPole,
    FreePoint,
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct OVertex {
    pub parent: usize,
    pub bubble: Bubble,
    pub attachment: Attachment,
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct OBubbleTree {
    pub base: OrbifoldSignature,
    /// Background bundle `O_0` on `M`: charge and weights `m_i^0`.
    pub root_type: BundleType,
    #[serde(default)]
    pub vertices: Vec<OVertex>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ODefect {
    Signature(String),
    RootType(String),
    BadParent { vertex: usize },
    UnknownSingularity { vertex: usize },
    ResidueOutOfRange { vertex: usize },
    AttachmentMismatch { vertex: usize },
    DuplicateChainHead { singularity: usize },
    ForkedChain { vertex: usize },
    WeightMismatch { vertex: usize },
    GhostFewChildren { vertex: usize },
    GhostWeightlessChild { vertex: usize },
}

impl ODefect {
    pub fn code(&self) -> &'static str {
        match self {
            ODefect::Signature(_) => "invalid_signature",
            ODefect::RootType(_) => "invalid_root_type",
            ODefect::BadParent { .. } => "bad_parent",
            ODefect::UnknownSingularity { .. } => "unknown_singularity",
            ODefect::ResidueOutOfRange { .. } => "residue_out_of_range",
            ODefect::AttachmentMismatch { .. } => "attachment_mismatch",
            ODefect::DuplicateChainHead { .. } => "duplicate_chain_head",
            ODefect::ForkedChain { .. } => "forked_chain",
            ODefect::WeightMismatch { .. } => "weight_mismatch",
            ODefect::GhostFewChildren { .. } => "ghost_few_children",
            ODefect::GhostWeightlessChild { .. } => "ghost_weightless_child",
        }
    }
}

impl fmt::Display for ODefect {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ODefect::Signature(s) => write!(f, "signature: {s}"),
            ODefect::RootType(s) => write!(f, "root type: {s}"),
            ODefect::BadParent { vertex } => write!(f, "vertex {vertex}: parent must precede it"),
            ODefect::UnknownSingularity { vertex } => {
                write!(f, "vertex {vertex}: singularity index out of range")
            }
            ODefect::ResidueOutOfRange { vertex } => {
                write!(f, "vertex {vertex}: weight residue out of range")
            }
            ODefect::AttachmentMismatch { vertex } => {
                write!(f, "vertex {vertex}: attachment does not fit bubble and parent")
            }
            ODefect::DuplicateChainHead { singularity } => {
                write!(f, "singularity {singularity}: more than one chain head")
            }
            ODefect::ForkedChain { vertex } => {
                write!(f, "vertex {vertex}: more than one singular child")
            }
            ODefect::WeightMismatch { vertex } => {
                write!(f, "vertex {vertex}: incoming weight differs from the one below it")
            }
            ODefect::GhostFewChildren { vertex } => {
                write!(f, "vertex {vertex}: ghost with fewer than two children upstairs")
            }
            ODefect::GhostWeightlessChild { vertex } => {
                write!(f, "vertex {vertex}: ghost with a child of total weight 0")
            }
        }
    }
}

impl OBubbleTree {
    /// The one-vertex tree.
    pub fn trivial(base: OrbifoldSignature, root_type: BundleType) -> Self {
        OBubbleTree { base, root_type, vertices: Vec::new() }
    }

    /// The tree on `M = X` (`alpha = 1`) matching a plain bubble tree, with
    /// vertex weights read as `c_2` (SU(2)) or `-p_1 / 4` (SO(3)).
    pub fn from_bubble_tree(tree: &BubbleTree, b2_plus: u64, group: Group) -> Self {
        let order = tree.preorder();
        let mut index = vec![0; tree.vertex_count()];
        for (i, &v) in order.iter().enumerate() {
            index[v] = i;
        }
        let root_weight = tree.weight(tree.root()) as i64;
        let charge = match group {
            Group::Su2 => root_weight,
            Group::So3 => -4 * root_weight,
        };
        let mut out = OBubbleTree::trivial(
            OrbifoldSignature::manifold(b2_plus, group),
            BundleType::new(charge, vec![]),
        );
        for &v in &order[1..] {
            out.add_free(index[tree.parent(v).expect("non-root")], tree.weight(v));
        }
        out
    }

    pub fn vertex_count(&self) -> usize {
        self.vertices.len() + 1
    }

    pub fn edge_count(&self) -> usize {
        self.vertices.len()
    }

    pub fn vertex(&self, v: usize) -> &OVertex {
        &self.vertices[v - 1]
    }

    pub fn add_free(&mut self, parent: usize, weight: u64) -> usize {
        self.vertices.push(OVertex {
            parent,
            bubble: Bubble::Free { weight },
            attachment: Attachment::FreePoint,
        });
        self.vertices.len()
    }

    /// Adds a singular bubble at the cone point (parent = root) or at the
    /// north pole of a singular parent.
    pub fn add_singular(
        &mut self,
        parent: usize,
        singularity: usize,
        weight: u64,
        m_in: u64,
        m_out: u64,
    ) -> usize {
        let attachment = if parent == 0 {
            Attachment::ConePoint { singularity }
        } else {
            Attachment::NorthPole
        };
        self.vertices.push(OVertex {
            parent,
            bubble: Bubble::Singular { singularity, weight, m_in, m_out },
            attachment,
        });
        self.vertices.len()
    }

    pub fn children(&self, v: usize) -> Vec<usize> {
        (1..self.vertex_count()).filter(|&c| self.vertex(c).parent == v).collect()
    }

    fn order_of(&self, singularity: usize) -> u64 {
        self.base.singularities[singularity].a
    }

    /// Number of upstairs copies of a vertex.
    pub fn multiplicity(&self, v: usize) -> u64 {
        match self.vertex(v).bubble {
            Bubble::Free { .. } => self.base.alpha,
            Bubble::Singular { singularity, .. } => self.base.alpha / self.order_of(singularity),
        }
    }

    pub fn validate(&self) -> std::result::Result<(), Vec<ODefect>> {
        let mut defects = Vec::new();
        if let Err(e) = self.base.validate() {
            let msg = e.iter().map(ToString::to_string).collect::<Vec<_>>().join("; ");
            return Err(vec![ODefect::Signature(msg)]);
        }
        if let Err(e) = validate_bundle(&self.base, &self.root_type) {
            defects.push(ODefect::RootType(e.to_string()));
            return Err(defects);
        }
        let n_sing = self.base.singularities.len();
        for v in 1..self.vertex_count() {
            let vx = self.vertex(v);
            if vx.parent >= v {
                defects.push(ODefect::BadParent { vertex: v });
                continue;
            }
            let parent_bubble = (vx.parent > 0).then(|| self.vertex(vx.parent).bubble);
            match vx.bubble {
                Bubble::Free { .. } => {
                    if vx.attachment != Attachment::FreePoint {
                        defects.push(ODefect::AttachmentMismatch { vertex: v });
                    }
                }
                Bubble::Singular { singularity, m_in, m_out, .. } => {
                    if singularity >= n_sing {
                        defects.push(ODefect::UnknownSingularity { vertex: v });
                        continue;
                    }
                    let a = self.order_of(singularity);
                    if m_in >= a || m_out >= a {
                        defects.push(ODefect::ResidueOutOfRange { vertex: v });
                    }
                    let (fits, incoming) = match (parent_bubble, vx.attachment) {
                        (None, Attachment::ConePoint { singularity: s }) => {
                            (s == singularity, self.root_type.weights[singularity])
                        }
                        (Some(Bubble::Singular { singularity: s, m_out: up, .. }), Attachment::NorthPole) => {
                            (s == singularity, up)
                        }
                        _ => (false, m_in),
                    };
                    if !fits {
                        defects.push(ODefect::AttachmentMismatch { vertex: v });
                    } else if incoming != m_in {
                        defects.push(ODefect::WeightMismatch { vertex: v });
                    }
                }
            }
        }
        if !defects.is_empty() {
            return Err(defects);
        }
        for i in 0..n_sing {
            let heads = self
                .children(0)
                .into_iter()
                .filter(|&c| matches!(self.vertex(c).attachment, Attachment::ConePoint { singularity } if singularity == i))
                .count();
            if heads > 1 {
                defects.push(ODefect::DuplicateChainHead { singularity: i });
            }
        }
        for v in 1..self.vertex_count() {
            let children = self.children(v);
            let singular_children =
                children.iter().filter(|&&c| matches!(self.vertex(c).bubble, Bubble::Singular { .. })).count();
            if singular_children > 1 {
                defects.push(ODefect::ForkedChain { vertex: v });
            }
            if self.vertex(v).bubble.weight() != 0 {
                continue;
            }
            let upstairs = match self.vertex(v).bubble {
                Bubble::Free { .. } => children.len(),
                Bubble::Singular { singularity, .. } => {
                    (children.len() - singular_children) * self.order_of(singularity) as usize
                        + singular_children
                }
            };
            if upstairs < 2 {
                defects.push(ODefect::GhostFewChildren { vertex: v });
            } else if children.iter().any(|&c| !self.carries_weight(c)) {
                defects.push(ODefect::GhostWeightlessChild { vertex: v });
            }
        }
        if defects.is_empty() {
            Ok(())
        } else {
            Err(defects)
        }
    }

    pub fn is_valid(&self) -> bool {
        self.validate().is_ok()
    }

    fn carries_weight(&self, v: usize) -> bool {
        self.vertex(v).bubble.weight() > 0 || self.children(v).into_iter().any(|c| self.carries_weight(c))
    }

    /// The singular vertices of the chain at singularity `i`, head first.
    pub fn chain(&self, i: usize) -> Vec<usize> {
        let mut out = Vec::new();
        let mut at = 0;
        loop {
            let next = self.children(at).into_iter().find(|&c| match self.vertex(c).bubble {
                Bubble::Singular { singularity, .. } => singularity == i,
                Bubble::Free { .. } => false,
            });
            match next {
                Some(c) => {
                    out.push(c);
                    at = c;
                }
                None => return out,
            }
        }
    }

    /// Upstairs charge on `M`: `c_2` for SU(2) or `p_1` for SO(3), where each
    /// unit of bubble weight counts as `-4` in `p_1`.
    pub fn total_charge(&self) -> i64 {
        let bubbles: i64 = (1..self.vertex_count())
            .map(|v| (self.multiplicity(v) * self.vertex(v).bubble.weight()) as i64)
            .sum();
        match self.base.group {
            Group::Su2 => self.root_type.charge + bubbles,
            Group::So3 => self.root_type.charge - 4 * bubbles,
        }
    }

    /// The bundle type of the glued connection.
    pub fn top_type(&self) -> BundleType {
        let mut top = self.root_type.clone();
        top.charge = self.total_charge();
        for i in 0..self.base.singularities.len() {
            if let Some(&tail) = self.chain(i).last() {
                if let Bubble::Singular { m_out, .. } = self.vertex(tail).bubble {
                    top.weights[i] = m_out;
                }
            }
        }
        top
    }

    /// Background is the trivial connection: no charge and trivial weights.
    pub fn is_excluded(&self) -> bool {
        self.root_type.charge == 0 && self.root_type.weights.iter().all(|&m| m == 0)
    }

    /// Some chain has more than one link.
    pub fn is_extrapolated(&self) -> bool {
        (0..self.base.singularities.len()).any(|i| self.chain(i).len() > 1)
    }

    /// Real dimension of the invariant gluing data on the edge into `v`.
    pub fn edge_fibre_dimension(&self, v: usize) -> u32 {
        match self.vertex(v).bubble {
            Bubble::Free { .. } => 4,
            Bubble::Singular { singularity, m_in, .. } => {
                gluing_parameter_group(self.base.group, self.order_of(singularity), m_in as i64)
                    .fibre_dimension()
            }
        }
    }

    /// `dim Gl_T^O`.
    pub fn gluing_dimension(&self) -> u32 {
        (1..self.vertex_count()).map(|v| self.edge_fibre_dimension(v)).sum()
    }

    /// `dim Gamma_T^O`: 3 for each ghost with trivial isotropy at both
    /// poles (free ghosts included), 1 for the other ghosts.
    pub fn gamma_dimension(&self) -> u32 {
        (1..self.vertex_count())
            .filter(|&v| self.vertex(v).bubble.weight() == 0)
            .map(|v| match self.vertex(v).bubble {
                Bubble::Singular { m_in: 0, m_out: 0, .. } | Bubble::Free { .. } => 3,
                Bubble::Singular { .. } => 1,
            })
            .sum()
    }

    /// Action and triple of a singular vertex.
    fn s4_data(&self, v: usize) -> Result<(S4Action, S4Triple)> {
        match self.vertex(v).bubble {
            Bubble::Singular { singularity, weight, m_in, m_out } => {
                let s = self.base.singularities[singularity];
                let action = S4Action::new(s.a, s.b)?;
                Ok((action, S4Triple::new(&action, weight, m_in as i64, m_out as i64)))
            }
            Bubble::Free { .. } => Err(Error::validation(format!("vertex {v} is not singular"))),
        }
    }

    /// Whether an invariant (possibly flat) connection with the given weights
    /// exists on a singular bubble. Weights are lifted mod `2a` in every way.
    pub fn singular_bubble_exists(&self, v: usize) -> Result<bool> {
        let (action, triple) = self.s4_data(v)?;
        let a = action.p;
        if triple.k == 0 {
            return Ok(triple.m % a == triple.m_prime % a);
        }
        for dm in [0, a] {
            for dmp in [0, a] {
                let lifted = S4Triple::new(
                    &action,
                    triple.k,
                    (triple.m + dm) as i64,
                    (triple.m_prime + dmp) as i64,
                );
                if exists_invariant(&action, &lifted)? {
                    return Ok(true);
                }
            }
        }
        Ok(false)
    }

    /// Balanced (dilation-reduced) dimension of the bubble at `v`.
    pub fn balanced_dimension(&self, v: usize) -> Result<i64> {
        match self.vertex(v).bubble {
            Bubble::Free { weight } => Ok(8 * weight as i64 - 8),
            Bubble::Singular { .. } => {
                if !self.singular_bubble_exists(v)? {
                    return Err(Error::PreconditionFailed(format!(
                        "no invariant connection on the singular bubble at vertex {v}"
                    )));
                }
                let (action, triple) = self.s4_data(v)?;
                require_integer(s4_index(&action, &triple)?, "singular bubble index").map(|d| d - 1)
            }
        }
    }

    pub fn position_dimension(&self, v: usize) -> i64 {
        match self.vertex(v).attachment {
            Attachment::FreePoint => 4,
            Attachment::ConePoint { .. } | Attachment::NorthPole => 0,
        }
    }

    pub fn stratum_dimension(&self) -> Result<StratumDimension> {
        self.validate().map_err(|d| {
            Error::validation(d.iter().map(ToString::to_string).collect::<Vec<_>>().join("; "))
        })?;
        let mut dim = dim_invariant_moduli(&self.base, &self.root_type)?;
        for v in 1..self.vertex_count() {
            dim += self.position_dimension(v) + self.balanced_dimension(v)?;
        }
        let extrapolated = self.is_extrapolated();
        Ok(if self.is_excluded() {
            StratumDimension::Excluded { formal_dimension: dim, extrapolated }
        } else {
            StratumDimension::Dimension { dimension: dim, extrapolated }
        })
    }

    /// Checks `dim M^O(top) = stratum + dim Gl_T^O` for any tree.
    pub fn consistency(&self) -> Result<ConsistencyReport> {
        let stratum = self.stratum_dimension()?;
        let top = dim_invariant_moduli(&self.base, &self.top_type())?;
        let gluing = self.gluing_dimension() as i64;
        Ok(ConsistencyReport {
            tree: self.encoding(),
            stratum: stratum.formal(),
            gluing,
            top,
            gamma: self.gamma_dimension(),
            excluded: stratum.is_excluded(),
            extrapolated: stratum.extrapolated(),
            balanced: top == stratum.formal() + gluing,
        })
    }

    /// The tree on `M`: every vertex repeated by its multiplicity, weights
    /// in units of `c_2`. SO(3) roots need `p_1` divisible by 4.
    pub fn pullback(&self) -> Result<BubbleTree> {
        let root_weight = match self.base.group {
            Group::Su2 => self.root_type.charge,
            Group::So3 if self.root_type.charge % 4 == 0 => -self.root_type.charge / 4,
            Group::So3 => return Err(Error::validation("p_1 of the root is not divisible by 4")),
        };
        if root_weight < 0 {
            return Err(Error::validation("negative root charge"));
        }
        let mut weights = vec![root_weight as u64];
        let mut parents = vec![None];
        self.lift_children(0, 0, &mut weights, &mut parents);
        BubbleTree::from_parents(weights, parents)
    }

    fn lift_children(&self, v: usize, up: usize, weights: &mut Vec<u64>, parents: &mut Vec<Option<usize>>) {
        for c in self.children(v) {
            let copies = match (v, self.vertex(c).bubble) {
                (0, _) => self.multiplicity(c),
                (_, Bubble::Singular { .. }) => 1,
                (_, Bubble::Free { .. }) => match self.vertex(v).bubble {
                    Bubble::Singular { singularity, .. } => self.order_of(singularity),
                    Bubble::Free { .. } => 1,
                },
            };
            for _ in 0..copies {
                weights.push(self.vertex(c).bubble.weight());
                parents.push(Some(up));
                let id = weights.len() - 1;
                self.lift_children(c, id, weights, parents);
            }
        }
    }

    pub fn encoding(&self) -> String {
        let weights: Vec<String> = self.root_type.weights.iter().map(u64::to_string).collect();
        format!("R[{}|{}]{}", self.root_type.charge, weights.join(","), self.children_encoding(0))
    }

    fn children_encoding(&self, v: usize) -> String {
        let mut keys: Vec<String> = self.children(v).into_iter().map(|c| self.encoding_at(c)).collect();
        keys.sort();
        keys.concat()
    }

    fn encoding_at(&self, v: usize) -> String {
        let inner = self.children_encoding(v);
        match self.vertex(v).bubble {
            Bubble::Free { weight } => format!("({weight}{inner})"),
            Bubble::Singular { singularity, weight, m_in, m_out } => {
                format!("{{{singularity}|{weight}|{m_in}>{m_out}{inner}}}")
            }
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum StratumDimension {
    Dimension { dimension: i64, extrapolated: bool },
    /// Background is the trivial connection; the value is formal only.
    Excluded { formal_dimension: i64, extrapolated: bool },
}

impl StratumDimension {
    pub fn formal(&self) -> i64 {
        match *self {
            StratumDimension::Dimension { dimension, .. } => dimension,
            StratumDimension::Excluded { formal_dimension, .. } => formal_dimension,
        }
    }

    pub fn is_excluded(&self) -> bool {
        matches!(self, StratumDimension::Excluded { .. })
    }

    pub fn extrapolated(&self) -> bool {
        match *self {
            StratumDimension::Dimension { extrapolated, .. }
            | StratumDimension::Excluded { extrapolated, .. } => extrapolated,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ConsistencyReport {
    pub tree: String,
    pub stratum: i64,
    pub gluing: i64,
    pub top: i64,
    pub gamma: u32,
    pub excluded: bool,
    pub extrapolated: bool,
    pub balanced: bool,
}

/// Which weights at the gluing point are trivial.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum GluingCase {
    /// `m_l^0 != 0`, `m_l != 0`.
    NonzeroNonzero,
    /// `m_l^0 = 0`, `m_l != 0`.
    ZeroNonzero,
    /// `m_l^0 != 0`, `m_l = 0`.
    NonzeroZero,
    /// `m_l^0 = 0`, `m_l = 0`.
    ZeroZero,
    /// A free bubble at a point with trivial stabiliser.
    FreePoint,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct GluingReport {
    pub tree: String,
    pub case: GluingCase,
    /// Nontrivial background weights.
    pub n_prime: i64,
    /// Nontrivial weights among `m_l^0, m_l`.
    pub n_double: i64,
    /// Nontrivial weights after gluing.
    pub n_triple: i64,
    pub dim_i: i64,
    pub dim_u1: Rational,
    pub position: i64,
    pub dim_u2_balanced: Rational,
    pub dim_top: Rational,
    /// `n''' = -4 + n' + n'' + dim(I) + 1`.
    pub counts_balanced: bool,
    /// `dim top = dim U_1 + position + dim U_2^b + dim(I) + 1`.
    pub dims_balanced: bool,
    pub balanced: bool,
    /// All three dimensions are integers and the bubble exists.
    pub realizable: bool,
}

/// The dimension check for a tree with exactly one edge, done in exact
/// rationals so that unrealizable data is reported rather than rejected.
pub fn gluing_consistency_check(t: &OBubbleTree) -> Result<GluingReport> {
    if t.edge_count() != 1 {
        return Err(Error::validation("gluing check needs a tree with exactly one edge"));
    }
    t.validate().map_err(|d| {
        Error::validation(d.iter().map(ToString::to_string).collect::<Vec<_>>().join("; "))
    })?;
    let top = t.top_type();
    let nontrivial = |w: &[u64]| {
        w.iter().zip(&t.base.singularities).filter(|(m, s)| *m % s.a != 0).count() as i64
    };
    let n_prime = nontrivial(&t.root_type.weights);
    let n_triple = nontrivial(&top.weights);
    let dim_u1 = invariant_index(&t.base, &t.root_type)?;
    let dim_top = invariant_index(&t.base, &top)?;
    let fibre = t.edge_fibre_dimension(1) as i64;
    let dim_i = fibre - 1;
    let position = t.position_dimension(1);
    let (case, n_double, dim_u2_balanced, exists) = match t.vertex(1).bubble {
        Bubble::Free { weight } => {
            (GluingCase::FreePoint, 0, Rational::from(8 * weight as i64 - 8), true)
        }
        Bubble::Singular { singularity, m_in, m_out, .. } => {
            let a = t.base.singularities[singularity].a;
            let case = match (m_in % a == 0, m_out % a == 0) {
                (false, false) => GluingCase::NonzeroNonzero,
                (true, false) => GluingCase::ZeroNonzero,
                (false, true) => GluingCase::NonzeroZero,
                (true, true) => GluingCase::ZeroZero,
            };
            let n_double = [m_in, m_out].iter().filter(|&&m| m % a != 0).count() as i64;
            let (action, triple) = t.s4_data(1)?;
            let balanced = s4_index(&action, &triple)? - Rational::one();
            (case, n_double, balanced, t.singular_bubble_exists(1)?)
        }
    };
    let counts_balanced =
        case == GluingCase::FreePoint || n_triple == -4 + n_prime + n_double + dim_i + 1;
    let dims_balanced = dim_top
        == dim_u1.clone() + Rational::from(position) + dim_u2_balanced.clone() + Rational::from(fibre);
    let realizable =
        exists && dim_u1.is_integer() && dim_u2_balanced.is_integer() && dim_top.is_integer();
    Ok(GluingReport {
        tree: t.encoding(),
        case,
        n_prime,
        n_double,
        n_triple,
        dim_i,
        dim_u1,
        position,
        dim_u2_balanced,
        dim_top,
        counts_balanced,
        dims_balanced,
        balanced: counts_balanced && dims_balanced,
        realizable,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct OTreeCaps {
    /// Largest vertex depth; the root has depth 0.
    pub depth_cap: usize,
    /// Largest weight of a single non-root vertex.
    pub weight_cap: u64,
    pub max_trees: usize,
}

impl OTreeCaps {
    pub fn new(depth_cap: usize, weight_cap: u64) -> Self {
        OTreeCaps { depth_cap, weight_cap, max_trees: 100_000 }
    }
}

/// Subtree under construction.
#[derive(Debug, Clone)]
enum Node {
    Free { weight: u64, children: Vec<Node> },
    Singular { singularity: usize, weight: u64, m_in: u64, m_out: u64, children: Vec<Node> },
}

impl Node {
    fn attach(&self, tree: &mut OBubbleTree, parent: usize) {
        let (id, children) = match self {
            Node::Free { weight, children } => (tree.add_free(parent, *weight), children),
            Node::Singular { singularity, weight, m_in, m_out, children } => {
                (tree.add_singular(parent, *singularity, *weight, *m_in, *m_out), children)
            }
        };
        for c in children {
            c.attach(tree, id);
        }
    }
}

struct OTreeGenerator<'a> {
    sig: &'a OrbifoldSignature,
    caps: OTreeCaps,
    /// `free[h][w]`: valid free subtrees of total weight `w` and height at most `h`.
    free: Vec<Vec<Vec<Node>>>,
}

impl<'a> OTreeGenerator<'a> {
    fn new(sig: &'a OrbifoldSignature, caps: OTreeCaps, max_weight: u64) -> Self {
        let mut free: Vec<Vec<Vec<Node>>> = Vec::new();
        for h in 0..caps.depth_cap {
            let mut by_weight = vec![Vec::new()];
            for w in 1..=max_weight {
                let mut out = Vec::new();
                for root in 0..=w.min(caps.weight_cap) {
                    let forests = if h == 0 {
                        if root == w { vec![Vec::new()] } else { Vec::new() }
                    } else {
                        multisets(&free[h - 1], w - root)
                    };
                    for children in forests {
                        if root == 0 && children.len() < 2 {
                            continue;
                        }
                        out.push(Node::Free { weight: root, children });
                    }
                }
                by_weight.push(out);
            }
            free.push(by_weight);
        }
        OTreeGenerator { sig, caps, free }
    }

    /// Free forests of total weight `w` whose members have height `< h`.
    fn free_forests(&self, w: u64, h: usize) -> Vec<Vec<Node>> {
        if h == 0 {
            return if w == 0 { vec![Vec::new()] } else { Vec::new() };
        }
        multisets(&self.free[h - 1], w)
    }

    /// Chains for singularity `i` starting at a vertex of depth
    /// `depth_cap - h + 1`, entering with weight `m_in`, ending with
    /// `m_final`, and costing at most `budget`. Returns `(chain, cost)`.
    fn chains(&self, i: usize, m_in: u64, m_final: u64, budget: u64, h: usize) -> Vec<(Node, u64)> {
        if h == 0 {
            return Vec::new();
        }
        let a = self.sig.singularities[i].a;
        let alpha = self.sig.alpha;
        let mult = alpha / a;
        let mut out = Vec::new();
        for k in 0..=self.caps.weight_cap {
            let own = mult * k;
            if own > budget {
                break;
            }
            for free_weight in 0..=(budget - own) / alpha {
                let free_cost = own + alpha * free_weight;
                for forest in self.free_forests(free_weight, h - 1) {
                    let upstairs = forest.len() as u64 * a;
                    for m_out in 0..a {
                        if m_out == m_final && (k > 0 || upstairs >= 2) {
                            out.push((
                                Node::Singular { singularity: i, weight: k, m_in, m_out, children: forest.clone() },
                                free_cost,
                            ));
                        }
                        if k == 0 && upstairs == 0 {
                            continue;
                        }
                        for (next, cost) in self.chains(i, m_out, m_final, budget - free_cost, h - 1) {
                            let mut children = forest.clone();
                            children.push(next);
                            out.push((
                                Node::Singular { singularity: i, weight: k, m_in, m_out, children },
                                free_cost + cost,
                            ));
                        }
                    }
                }
            }
        }
        out
    }
}

/// Multisets from `pool[w']` (indexed by weight) with total weight `w`.
fn multisets(pool: &[Vec<Node>], w: u64) -> Vec<Vec<Node>> {
    fn go(pool: &[Vec<Node>], rest: u64, from: (usize, usize), cur: &mut Vec<Node>, out: &mut Vec<Vec<Node>>) {
        if rest == 0 {
            out.push(cur.clone());
            return;
        }
        for s in from.0..=(rest as usize).min(pool.len().saturating_sub(1)) {
            let start = if s == from.0 { from.1 } else { 0 };
            for i in start..pool[s].len() {
                cur.push(pool[s][i].clone());
                go(pool, rest - s as u64, (s, i), cur, out);
                cur.pop();
            }
        }
    }
    let mut out = Vec::new();
    go(pool, w, (1, 0), &mut Vec::new(), &mut out);
    out
}

/// All valid trees within the caps whose glued bundle type is `bundle`:
/// charge equal to `total_charge` and final weights `m_i`. The background
/// charge must stay non-negative in energy (`c_2 >= 0`, `p_1 <= 0`).
/// Trees come out sorted by canonical encoding.
pub fn enumerate_o_trees(
    sig: &OrbifoldSignature,
    bundle: &BundleType,
    caps: OTreeCaps,
) -> Result<Vec<OBubbleTree>> {
    validate_bundle(sig, bundle)?;
    if caps.depth_cap == 0 || caps.weight_cap == 0 {
        return Err(Error::validation("caps must be positive"));
    }
    let budget = match sig.group {
        Group::Su2 => bundle.charge,
        Group::So3 => (-bundle.charge).div_euclid(4),
    };
    if budget < 0 {
        return Ok(Vec::new());
    }
    let budget = budget as u64;
    let generator = OTreeGenerator::new(sig, caps, budget / sig.alpha);

    // per singularity: (root weight m_i^0, chain or none, cost)
    let mut options: Vec<Vec<(u64, Option<Node>, u64)>> = Vec::new();
    for (i, s) in sig.singularities.iter().enumerate() {
        let mut opts = vec![(bundle.weights[i], None, 0)];
        for m0 in 0..s.a {
            for (chain, cost) in generator.chains(i, m0, bundle.weights[i], budget, caps.depth_cap) {
                opts.push((m0, Some(chain), cost));
            }
        }
        options.push(opts);
    }

    let mut seen = BTreeSet::new();
    let mut out = Vec::new();
    let mut pick = vec![0usize; options.len()];
    loop {
        let chain_cost: u64 = pick.iter().zip(&options).map(|(&j, o)| o[j].2).sum();
        if chain_cost <= budget {
            let weights: Vec<u64> = pick.iter().zip(&options).map(|(&j, o)| o[j].0).collect();
            for free_weight in 0..=(budget - chain_cost) / sig.alpha {
                let cost = (chain_cost + sig.alpha * free_weight) as i64;
                let charge = match sig.group {
                    Group::Su2 => bundle.charge - cost,
                    Group::So3 => bundle.charge + 4 * cost,
                };
                let mut root_type = bundle.clone();
                root_type.charge = charge;
                root_type.weights = weights.clone();
                if validate_bundle(sig, &root_type).is_err() {
                    continue;
                }
                for forest in generator.free_forests(free_weight, caps.depth_cap) {
                    let mut tree = OBubbleTree::trivial(sig.clone(), root_type.clone());
                    for (j, o) in pick.iter().zip(&options) {
                        if let Some(chain) = &o[*j].1 {
                            chain.attach(&mut tree, 0);
                        }
                    }
                    for node in &forest {
                        node.attach(&mut tree, 0);
                    }
                    debug_assert!(tree.is_valid(), "{}", tree.encoding());
                    if seen.insert(tree.encoding()) {
                        out.push(tree);
                        if out.len() > caps.max_trees {
                            return Err(Error::ResourceLimit(format!(
                                "more than {} trees within the caps",
                                caps.max_trees
                            )));
                        }
                    }
                }
            }
        }
        // odometer over the per-singularity options
        let mut i = pick.len();
        loop {
            if i == 0 {
                out.sort_by_key(|t| t.encoding());
                return Ok(out);
            }
            i -= 1;
            pick[i] += 1;
            if pick[i] < options[i].len() {
                break;
            }
            pick[i] = 0;
        }
    }
}
