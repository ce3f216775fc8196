//! Enumeration of the predicted irreducible components of the locus of
//! degree-d line bundles with at least r+1 sections on a general k-gonal
//! curve of genus g.
//!
//! Components correspond to balanced-plus-balanced splitting types whose
//! section count at twist zero is exactly r+1, whose total obeys the degree
//! relation total = d - g + 1 - k, which pass the maximality condition
//! b >= 2 or (b, v) = (1, 0), and whose u-invariant does not exceed g.

use std::collections::BTreeSet;
use std::fmt;
use std::ops::Range;

use serde::Serialize;
use thiserror::Error;

use crate::splitting::{BBType, SplittingType};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ClassifyError {
    #[error("genus must be nonnegative, got {0}")]
    NegativeGenus(i64),
    #[error("gonality must be at least 2, got {0}")]
    SmallGonality(i64),
    #[error("rank must be nonnegative, got {0}")]
    NegativeRank(i64),
    #[error("pattern precondition violated: {0}")]
    BadPattern(String),
}

/// The ambient discrete data: genus g, gonality k, line-bundle degree d.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct GonalContext {
    pub g: i64,
    pub k: i64,
    pub d: i64,
}

impl GonalContext {
    pub fn new(g: i64, k: i64, d: i64) -> Result<Self, ClassifyError> {
        if g < 0 {
            return Err(ClassifyError::NegativeGenus(g));
        }
        if k < 2 {
            return Err(ClassifyError::SmallGonality(k));
        }
        Ok(GonalContext { g, k, d })
    }

    /// The degree relation: any splitting type attached to this context has
    /// this total.
    pub fn expected_total(&self) -> i64 {
        self.d - self.g + 1 - self.k
    }

    pub fn admits(&self, e: &SplittingType) -> bool {
        e.len() as i64 == self.k && e.total() == self.expected_total()
    }
}

/// A classification query: context plus the rank r (components of the locus
/// of line bundles with at least r+1 sections).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct Query {
    pub g: i64,
    pub k: i64,
    pub d: i64,
    pub r: i64,
}

impl Query {
    pub fn new(g: i64, k: i64, d: i64, r: i64) -> Result<Self, ClassifyError> {
        GonalContext::new(g, k, d)?;
        if r < 0 {
            return Err(ClassifyError::NegativeRank(r));
        }
        Ok(Query { g, k, d, r })
    }

    pub fn context(&self) -> GonalContext {
        GonalContext { g: self.g, k: self.k, d: self.d }
    }
}

/// The Brill-Noether number g - (r+1)(g - d + r), the expected dimension of
/// the rank-r locus on a general curve of genus g.
pub fn rho(g: i64, d: i64, r: i64) -> i64 {
    g - (r + 1) * (g - d + r)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum ComponentKind {
    I,
    II,
    III,
}

impl fmt::Display for ComponentKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ComponentKind::I => write!(f, "I"),
            ComponentKind::II => write!(f, "II"),
            ComponentKind::III => write!(f, "III"),
        }
    }
}

/// A type III component is a translate of a lower-degree component by a
/// multiple of the pencil.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Translation {
    pub a: i64,
    pub base: Box<ComponentRecord>,
}

/// One predicted irreducible component.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ComponentRecord {
    pub context: GonalContext,
    pub rank: i64,
    pub splitting_type: SplittingType,
    pub bb: BBType,
    pub kind: ComponentKind,
    pub dim: i64,
    pub irreducible: bool,
    pub finite_points: bool,
    pub translation: Option<Translation>,
}

fn component_kind(bb: &BBType) -> ComponentKind {
    match (bb.a, bb.v) {
        (0, 0) => ComponentKind::I,
        (0, _) => ComponentKind::II,
        _ => ComponentKind::III,
    }
}

fn build_record(query: &Query, bb: BBType, with_translation: bool) -> ComponentRecord {
    let e = bb.splitting_type();
    let u = e.u_invariant();
    let g = query.g;
    assert!(u <= g, "record with empty stratum");
    assert_eq!(e.h0(0), query.r + 1, "section count drifted from the query rank");
    let kind = component_kind(&bb);
    let dim = g - u;
    if kind == ComponentKind::I {
        assert_eq!(dim, rho(g, query.d, query.r), "type I dimension must be the Brill-Noether number");
    }
    let translation = if with_translation && kind == ComponentKind::III {
        let a = bb.a;
        let base_e = e.twist(-a);
        let base_bb = base_e.detect_bb().expect("translate of a pattern is a pattern");
        let base_query = Query {
            g,
            k: query.k,
            d: query.d - a * query.k,
            // rank recomputed from the section count of the translate
            r: base_e.h0(0) - 1,
        };
        Some(Translation { a, base: Box::new(build_record(&base_query, base_bb, false)) })
    } else {
        None
    };
    ComponentRecord {
        context: query.context(),
        rank: query.r,
        splitting_type: e,
        bb,
        kind,
        dim,
        irreducible: u < g,
        finite_points: u == g,
        translation,
    }
}

/// The component list of the query, in lexicographic (a, b, y, u, v) order.
/// Patterns with b = 1 and v > 0 sit inside larger strata and are excluded.
pub fn classify_components(query: &Query) -> Vec<ComponentRecord> {
    classify_components_with(query, false)
}

/// Same enumeration, optionally keeping the non-maximal b = 1, v > 0 strata.
pub fn classify_components_with(query: &Query, include_nonmaximal: bool) -> Vec<ComponentRecord> {
    let k = query.k;
    let target = query.r + 1;
    let total = query.context().expected_total();
    let mut found: Vec<(i64, i64, i64, i64, i64)> = Vec::new();
    // solve u(a+1) + v(a+2) = r + 1 first, then fit (x, y, b) to the total
    for a in 0..=query.r {
        for v in 0..=(target / (a + 2)) {
            let rem = target - v * (a + 2);
            if rem <= 0 || rem % (a + 1) != 0 {
                continue;
            }
            let u = rem / (a + 1);
            let free = k - u - v;
            if free < 1 {
                continue;
            }
            // x(b+1) + y b = u a + v(a+1) - total and x + y = free force
            // b = (t_val - x) / free
            let t_val = u * a + v * (a + 1) - total;
            for x in 0..free {
                let y = free - x;
                if (t_val - x) % free != 0 {
                    continue;
                }
                let b = (t_val - x) / free;
                if b < 1 {
                    continue;
                }
                let maximal = b >= 2 || v == 0;
                if !maximal && !include_nonmaximal {
                    continue;
                }
                let bb = BBType::new(a, b, x as usize, y as usize, u as usize, v as usize)
                    .expect("enumerated parameters are valid");
                debug_assert_eq!(bb.splitting_type().total(), total);
                if bb.splitting_type().u_invariant() > query.g {
                    continue;
                }
                found.push((a, b, y, u, v));
            }
        }
    }
    found.sort_unstable();
    found
        .into_iter()
        .map(|(a, b, y, u, v)| {
            let x = k - y - u - v;
            let bb = BBType::new(a, b, x as usize, y as usize, u as usize, v as usize).unwrap();
            build_record(query, bb, true)
        })
        .collect()
}

/// The codimension identity relating a section-count jump of size t to the
/// u-invariant difference of the two patterns. Structural preconditions
/// (shapes of the two patterns, the degree relation for the first) are
/// errors; the numerical identities themselves are the returned boolean.
pub fn check_codim_identity(
    bb_i: &BBType,
    bb_ii: &BBType,
    g: i64,
    k: i64,
    d: i64,
) -> Result<bool, ClassifyError> {
    if bb_i.a != 0 || bb_i.v != 0 {
        return Err(ClassifyError::BadPattern(format!(
            "first pattern must have a = 0 and v = 0, got {bb_i}"
        )));
    }
    if bb_ii.a != 0 {
        return Err(ClassifyError::BadPattern(format!("second pattern must have a = 0, got {bb_ii}")));
    }
    if bb_i.len() as i64 != k || bb_ii.len() as i64 != k {
        return Err(ClassifyError::BadPattern(format!(
            "patterns must both have length {k}, got {} and {}",
            bb_i.len(),
            bb_ii.len()
        )));
    }
    let r = bb_i.u as i64 - 1;
    if bb_ii.v as i64 != r + 1 {
        return Err(ClassifyError::BadPattern(format!(
            "second pattern must have v = r + 1 = {}, got v = {}",
            r + 1,
            bb_ii.v
        )));
    }
    if bb_i.splitting_type().total() != d - g + 1 - k {
        return Err(ClassifyError::BadPattern(
            "first pattern does not satisfy the degree relation".into(),
        ));
    }
    Ok(codim_identity_raw(
        bb_i.b,
        bb_i.y as i64,
        bb_ii.b,
        bb_ii.y as i64,
        bb_ii.u as i64,
        r,
        g,
        k,
        d,
    ))
}

/// The raw identity checker; also covers the degenerate t = 0 case that the
/// pattern type cannot represent.
#[allow(clippy::too_many_arguments)]
pub(crate) fn codim_identity_raw(
    b: i64,
    y: i64,
    b2: i64,
    y2: i64,
    t: i64,
    r: i64,
    g: i64,
    k: i64,
    d: i64,
) -> bool {
    let x = k - y - (r + 1);
    let x2 = k - y2 - t - (r + 1);
    if x < 0 || x2 < 0 {
        return false;
    }
    // the two intermediate identities
    let id1 = g + k - d - 1 == b * (k - r - 1) + (k - r - 1) - y;
    let id2 = (b2 + 1) * (k - r - 1 - t) == b * (k - r - 1) - y + y2;
    // the codimension identity itself, with both u-invariants computed
    // independently of the arithmetic on the right-hand side
    let e_i = pattern_entries(b, x, y, r + 1, 0);
    let e_ii_shifted: Vec<i64> = pattern_entries(b2, x2, y2, t, r + 1).iter().map(|e| e - 1).collect();
    let u_i = SplittingType::new(e_i).unwrap().u_invariant();
    let u_ii = SplittingType::new(e_ii_shifted).unwrap().u_invariant();
    let main = u_ii - u_i == t * (g - k - d + t + 2 * r + 1);
    id1 && id2 && main
}

/// ((-b-1)^x, (-b)^y, 0^u, 1^v) as raw entries; tolerates u = 0 or v = 0.
fn pattern_entries(b: i64, x: i64, y: i64, u: i64, v: i64) -> Vec<i64> {
    let mut entries = Vec::new();
    entries.extend(std::iter::repeat(-b - 1).take(x as usize));
    entries.extend(std::iter::repeat(-b).take(y as usize));
    entries.extend(std::iter::repeat(0).take(u as usize));
    entries.extend(std::iter::repeat(1).take(v as usize));
    entries
}

/// Threshold for a section-count jump of size t to define a genuine smaller
/// stratum next to a type I pattern: t >= (y+1) - (b-1)(y+x).
pub fn type_ii_threshold(bb_i: &BBType, t: i64) -> Result<bool, ClassifyError> {
    if bb_i.a != 0 || bb_i.v != 0 {
        return Err(ClassifyError::BadPattern(format!(
            "pattern must have a = 0 and v = 0, got {bb_i}"
        )));
    }
    let threshold = (bb_i.y as i64 + 1) - (bb_i.b - 1) * (bb_i.y as i64 + bb_i.x as i64);
    Ok(t >= threshold)
}

/// Twists whose section conditions cut out the stratum scheme: the
/// half-open interval [-e_k, -e_1 - 1). Empty for balanced types.
pub fn fitting_twist_range(e: &SplittingType) -> Range<i64> {
    -e.max_entry()..-e.min_entry() - 1
}

/// Twists that control the tangent space: -e_i over entries strictly above
/// e_1 + 1, deduplicated.
pub fn tangent_twist_set(e: &SplittingType) -> BTreeSet<i64> {
    e.entries().iter().filter(|&&ei| ei > e.min_entry() + 1).map(|&ei| -ei).collect()
}

/// Type I components parametrize bundles with no sections after one
/// un-twist, which caps their section count at k - 1.
pub fn free_from_m_bound(record: &ComponentRecord) -> bool {
    assert_eq!(record.kind, ComponentKind::I, "bound applies to type I records");
    record.rank + 1 <= record.context.k - 1
}

// --- serialization ---

#[derive(Serialize)]
pub struct ClassifyOutput<'a> {
    pub query: &'a Query,
    pub components: Vec<ComponentJson>,
}

#[derive(Serialize)]
pub struct ComponentJson {
    pub e: SplittingType,
    pub bb: BBType,
    pub kind: String,
    pub dim: i64,
    pub irreducible: bool,
    pub finite_points: bool,
    pub translation: Option<TranslationJson>,
}

#[derive(Serialize)]
pub struct TranslationJson {
    pub a: i64,
    pub base_e: SplittingType,
}

impl ComponentRecord {
    pub fn to_json_entry(&self) -> ComponentJson {
        ComponentJson {
            e: self.splitting_type.clone(),
            bb: self.bb,
            kind: self.kind.to_string(),
            dim: self.dim,
            irreducible: self.irreducible,
            finite_points: self.finite_points,
            translation: self
                .translation
                .as_ref()
                .map(|t| TranslationJson { a: t.a, base_e: t.base.splitting_type.clone() }),
        }
    }
}

pub fn to_json(query: &Query, records: &[ComponentRecord]) -> serde_json::Value {
    let out = ClassifyOutput {
        query,
        components: records.iter().map(ComponentRecord::to_json_entry).collect(),
    };
    serde_json::to_value(out).expect("classification output serializes")
}

pub fn to_csv(records: &[ComponentRecord]) -> String {
    let mut out = String::from(
        "e,kind,dim,irreducible,finite_points,a,b,x,y,u,v,translation_a,translation_base_e\n",
    );
    for rec in records {
        let e_cell = rec
            .splitting_type
            .entries()
            .iter()
            .map(i64::to_string)
            .collect::<Vec<_>>()
            .join(" ");
        let (ta, tbase) = match &rec.translation {
            Some(t) => (
                t.a.to_string(),
                t.base.splitting_type.entries().iter().map(i64::to_string).collect::<Vec<_>>().join(" "),
            ),
            None => (String::new(), String::new()),
        };
        out.push_str(&format!(
            "{},{},{},{},{},{},{},{},{},{},{},{},{}\n",
            e_cell,
            rec.kind,
            rec.dim,
            rec.irreducible,
            rec.finite_points,
            rec.bb.a,
            rec.bb.b,
            rec.bb.x,
            rec.bb.y,
            rec.bb.u,
            rec.bb.v,
            ta,
            tbase,
        ));
    }
    out
}
