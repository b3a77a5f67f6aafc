//! The quiver family Q_n and its algebras A_n and c_p.
//!
//! Vertices of Q_n are tuples (a_0, ..., a_n) with entries in [0, p); the
//! arrow f_{i,e} (1 <= i <= n, e = +-1) exists at a whenever a_{i-1} != p-1
//! and a_i + e stays in range, and sends a to the tuple with a_{i-1}
//! replaced by p-2-a_{i-1} and a_i by a_i + e. Q_n is the connected
//! component of the zero tuple. For p = 2 the same rule applies; the
//! coordinate flip is invisible there (p-2-a_{i-1} = 0 forces and keeps
//! a_{i-1} = 0) and a_0 is omitted from the stored labels.
//!
//! Relation schemes are instantiated per vertex: a two-monomial scheme is
//! imposed when both monomials exist; a single surviving monomial is set to
//! zero only when the side condition stated with the scheme holds. For
//! scheme (5) the side condition and arrow existence overlap imperfectly;
//! vertices where they disagree are recorded in the audit rather than
//! silently resolved.

use crate::bimodule::{AlgRef, Bimodule};
use crate::quiver::{build_algebra, left_projective, Arrow, PresentedAlgebra, Quiver, Relation, RelationSet};
use crate::{AlgError, Result};
use std::collections::BTreeMap;

pub type VertexTuple = Vec<i64>;

/// Serialized form: decimal entries joined by dots; a_0 omitted when p = 2.
pub fn vertex_label(p: u64, t: &[i64]) -> String {
    let skip = if p == 2 { 1 } else { 0 };
    t[skip..].iter().map(|x| x.to_string()).collect::<Vec<_>>().join(".")
}

/// The involution a -> (p-1-a_i).
pub fn tilde(p: u64, t: &[i64]) -> VertexTuple {
    t.iter().map(|&a| (p as i64) - 1 - a).collect()
}

fn arrow_target(p: u64, t: &[i64], i: usize, eps: i64) -> Option<VertexTuple> {
    let pi = p as i64;
    if t[i - 1] == pi - 1 {
        return None;
    }
    let ni = t[i] + eps;
    if ni < 0 || ni >= pi {
        return None;
    }
    let mut out = t.to_vec();
    out[i - 1] = pi - 2 - t[i - 1];
    out[i] = ni;
    Some(out)
}

/// Breadth-first closure of the zero tuple under the arrow rule.
pub fn build_qn(p: u64, n: usize) -> Quiver {
    let zero: VertexTuple = vec![0; n + 1];
    let mut verts: Vec<VertexTuple> = vec![zero.clone()];
    let mut seen: BTreeMap<VertexTuple, usize> = [(zero, 0)].into();
    let mut frontier = vec![0usize];
    while !frontier.is_empty() {
        let mut next = Vec::new();
        for &vi in &frontier {
            let t = verts[vi].clone();
            for i in 1..=n {
                for eps in [1i64, -1] {
                    if let Some(tt) = arrow_target(p, &t, i, eps) {
                        if !seen.contains_key(&tt) {
                            seen.insert(tt.clone(), verts.len());
                            next.push(verts.len());
                            verts.push(tt);
                        }
                    }
                }
            }
        }
        frontier = next;
    }
    verts.sort();
    let index: BTreeMap<VertexTuple, usize> =
        verts.iter().enumerate().map(|(i, v)| (v.clone(), i)).collect();
    let mut arrows = Vec::new();
    for t in &verts {
        for i in 1..=n {
            for eps in [1i64, -1] {
                if let Some(tt) = arrow_target(p, t, i, eps) {
                    let mut degree = vec![0i64; n];
                    degree[i - 1] = 1;
                    arrows.push(Arrow {
                        id: format!(
                            "f{}{}@{}",
                            i,
                            if eps > 0 { "+" } else { "-" },
                            vertex_label(p, t)
                        ),
                        src: index[t],
                        tgt: index[&tt],
                        degree,
                    });
                }
            }
        }
    }
    Quiver {
        vertices: verts.iter().map(|t| vertex_label(p, t)).collect(),
        arrows,
        grading_rank: n,
    }
}

/// Bookkeeping for relation-scheme instantiation: how often each scheme
/// fired, and the scheme-(5) vertices where the stated side condition and
/// arrow existence disagreed.
#[derive(Debug, Default, Clone)]
pub struct RelationAudit {
    pub counts: BTreeMap<&'static str, usize>,
    /// (vertex, i, eps1, eps2) where both monomials exist but the side
    /// condition fails, or vice versa
    pub scheme5_disagreements: Vec<(VertexTuple, usize, i64, i64)>,
}

struct An<'a> {
    p: u64,
    quiver: &'a Quiver,
    verts: Vec<VertexTuple>,
    index: BTreeMap<VertexTuple, usize>,
    arrow_at: BTreeMap<(usize, usize, i64), usize>, // (vertex, i, eps) -> arrow
}

impl<'a> An<'a> {
    fn new(p: u64, quiver: &'a Quiver, verts: Vec<VertexTuple>) -> Self {
        let index: BTreeMap<VertexTuple, usize> =
            verts.iter().enumerate().map(|(i, v)| (v.clone(), i)).collect();
        let mut arrow_at = BTreeMap::new();
        for (ai, a) in quiver.arrows.iter().enumerate() {
            // recover (i, eps) from the degree vector and endpoint tuples
            let i = a.degree.iter().position(|&d| d == 1).unwrap() + 1;
            let eps = verts[a.tgt][i] - verts[a.src][i];
            arrow_at.insert((a.src, i, eps), ai);
        }
        An { p, quiver, verts, index, arrow_at }
    }

    /// Walks a monomial given as (i, eps) steps in application order;
    /// returns the arrow path if every step exists.
    fn monomial(&self, start: &[i64], steps: &[(usize, i64)]) -> Option<Vec<usize>> {
        let mut at = self.index[start];
        let mut path = Vec::with_capacity(steps.len());
        for &(i, eps) in steps {
            let ai = *self.arrow_at.get(&(at, i, eps))?;
            path.push(ai);
            at = self.quiver.arrows[ai].tgt;
        }
        Some(path)
    }
}

/// Instantiates the relation schemes of A_n over every vertex of Q_n.
pub fn an_relations(p: u64, n: usize, quiver: &Quiver) -> (RelationSet, RelationAudit) {
    let pi = p as i64;
    let verts: Vec<VertexTuple> = quiver
        .vertices
        .iter()
        .map(|s| {
            let mut t: VertexTuple = if s.is_empty() {
                Vec::new()
            } else {
                s.split('.').map(|x| x.parse().unwrap()).collect()
            };
            if p == 2 {
                t.insert(0, 0);
            }
            t
        })
        .collect();
    let ctx = An::new(p, quiver, verts.clone());
    let mut rels = Vec::new();
    let mut audit = RelationAudit::default();
    let mut bump = |audit: &mut RelationAudit, k: &'static str| {
        *audit.counts.entry(k).or_insert(0) += 1;
    };

    for a in &verts {
        for i in 1..=n {
            if p >= 3 {
                // (1) distant commutation
                for j in (i + 2)..=n {
                    for e1 in [1i64, -1] {
                        for e2 in [1i64, -1] {
                            let m1 = ctx.monomial(a, &[(j, e2), (i, e1)]);
                            let m2 = ctx.monomial(a, &[(i, e1), (j, e2)]);
                            if let (Some(w1), Some(w2)) = (m1, m2) {
                                rels.push(Relation::difference(w1, w2, p));
                                bump(&mut audit, "(1)");
                            }
                        }
                    }
                }
                // (2) f_{i,e}^2 = 0
                for e in [1i64, -1] {
                    if let Some(w) = ctx.monomial(a, &[(i, e), (i, e)]) {
                        rels.push(Relation::monomial(w));
                        bump(&mut audit, "(2)");
                    }
                }
                // (3) f_{i,e} f_{i,-e} = 0 when a_i = p-1
                if a[i] == pi - 1 {
                    for e in [1i64, -1] {
                        if let Some(w) = ctx.monomial(a, &[(i, -e), (i, e)]) {
                            rels.push(Relation::monomial(w));
                            bump(&mut audit, "(3)");
                        }
                    }
                }
                // (4) loops commute when a_i > 0
                {
                    let m1 = ctx.monomial(a, &[(i, -1), (i, 1)]);
                    let m2 = ctx.monomial(a, &[(i, 1), (i, -1)]);
                    let guard = a[i] > 0;
                    match (m1, m2) {
                        (Some(w1), Some(w2)) => {
                            rels.push(Relation::difference(w1, w2, p));
                            bump(&mut audit, "(4)");
                        }
                        (Some(w), None) | (None, Some(w)) if guard => {
                            rels.push(Relation::monomial(w));
                            bump(&mut audit, "(4)");
                        }
                        _ => {}
                    }
                }
                // (5) adjacent exchange
                if i + 1 <= n {
                    for e1 in [1i64, -1] {
                        for e2 in [1i64, -1] {
                            let m1 = ctx.monomial(a, &[(i + 1, e2), (i, e1)]);
                            let m2 = ctx.monomial(a, &[(i, -e1), (i + 1, e2)]);
                            let guard = (0..pi).contains(&(a[i] + e1))
                                && (0..pi).contains(&(pi - 2 - a[i] - e1))
                                && a[i - 1] != pi - 1
                                && a[i] != pi - 1;
                            match (m1, m2) {
                                (Some(w1), Some(w2)) => {
                                    if !guard {
                                        audit.scheme5_disagreements.push((a.clone(), i, e1, e2));
                                    }
                                    rels.push(Relation::difference(w1, w2, p));
                                    bump(&mut audit, "(5)");
                                }
                                (Some(w), None) | (None, Some(w)) => {
                                    if guard {
                                        rels.push(Relation::monomial(w));
                                        bump(&mut audit, "(5)");
                                    }
                                }
                                _ => {}
                            }
                        }
                    }
                }
            } else {
                // p = 2 table
                // (i) distant commutation
                for j in (i + 2)..=n {
                    for e1 in [1i64, -1] {
                        for e2 in [1i64, -1] {
                            let m1 = ctx.monomial(a, &[(j, e2), (i, e1)]);
                            let m2 = ctx.monomial(a, &[(i, e1), (j, e2)]);
                            if let (Some(w1), Some(w2)) = (m1, m2) {
                                rels.push(Relation::difference(w1, w2, p));
                                bump(&mut audit, "(i)");
                            }
                        }
                    }
                }
                // (ii) up-then-down vanishes at a_i = 1
                if a[i] == 1 {
                    if let Some(w) = ctx.monomial(a, &[(i, -1), (i, 1)]) {
                        rels.push(Relation::monomial(w));
                        bump(&mut audit, "(ii)");
                    }
                }
                // (iii) the loop at the bottom commutes with f_{i+1}
                if i + 1 <= n && a[i] == 0 && a[i - 1] == 0 {
                    for e in [1i64, -1] {
                        let m1 = ctx.monomial(a, &[(i, 1), (i, -1), (i + 1, e)]);
                        let m2 = ctx.monomial(a, &[(i + 1, e), (i, 1), (i, -1)]);
                        if let (Some(w1), Some(w2)) = (m1, m2) {
                            rels.push(Relation::difference(w1, w2, p));
                            bump(&mut audit, "(iii)");
                        }
                    }
                }
                // (iv) down, across, up vanishes at a_i = 1
                if i + 1 <= n && a[i] == 1 && a[i - 1] == 0 {
                    for e in [1i64, -1] {
                        if let Some(w) = ctx.monomial(a, &[(i, -1), (i + 1, e), (i, 1)]) {
                            rels.push(Relation::monomial(w));
                            bump(&mut audit, "(iv)");
                        }
                    }
                }
            }
        }
    }
    (RelationSet(rels), audit)
}

/// Builds A_n. The degree cap (3, ..., 3) is certified by boundary
/// vanishing inside `build_algebra`: every path with three steps in one
/// direction dies under the relations.
pub fn build_an(p: u64, n: usize) -> Result<(PresentedAlgebra, RelationAudit)> {
    let quiver = build_qn(p, n);
    let (rels, audit) = an_relations(p, n, &quiver);
    let cap = vec![3i64; n];
    let pa = build_algebra(&quiver, &rels, p, &cap)?;
    if !pa.alg.tightness_check() {
        return Err(AlgError::Structure("A_n failed the tightness check".into()));
    }
    Ok((pa, audit))
}

/// The zigzag presentation of c_p: vertices 1..p, arrows xi_i: i -> i+1 in
/// degree (1,0) and eta_i: i+1 -> i in degree (0,1), relations
/// xi xi = 0, eta eta = 0, the two loops at interior vertices агree, and
/// the loop at vertex p vanishes.
pub fn build_cp(p: u64) -> Result<PresentedAlgebra> {
    let pn = p as usize;
    let vertices: Vec<String> = (1..=pn).map(|i| format!("e{}", i)).collect();
    let mut arrows = Vec::new();
    for i in 1..pn {
        arrows.push(Arrow {
            id: format!("xi{}", i),
            src: i - 1,
            tgt: i,
            degree: vec![1, 0],
        });
        arrows.push(Arrow {
            id: format!("eta{}", i),
            src: i,
            tgt: i - 1,
            degree: vec![0, 1],
        });
    }
    let quiver = Quiver { vertices, arrows, grading_rank: 2 };
    let xi = |i: usize| quiver.arrow_index(&format!("xi{}", i)).unwrap();
    let eta = |i: usize| quiver.arrow_index(&format!("eta{}", i)).unwrap();
    let mut rels = Vec::new();
    for i in 1..pn - 1 {
        // xi_{i+1} xi_i and eta_i eta_{i+1} (application order: rightmost first)
        rels.push(Relation::monomial(vec![xi(i), xi(i + 1)]));
        rels.push(Relation::monomial(vec![eta(i + 1), eta(i)]));
        // xi_i eta_i = eta_{i+1} xi_{i+1}: both are the loop at vertex i+1
        rels.push(Relation::difference(
            vec![eta(i), xi(i)],
            vec![xi(i + 1), eta(i + 1)],
            p,
        ));
    }
    // loop at vertex p dies
    rels.push(Relation::monomial(vec![eta(pn - 1), xi(pn - 1)]));
    build_algebra(&quiver, &RelationSet(rels), p, &[2, 2])
}

/// Dictionary into a c_p-shaped algebra: basis indices of the vertex
/// idempotents, arrows and loops.
pub struct CpDict {
    pub p: u64,
    pub e: Vec<usize>,
    pub xi: Vec<usize>,
    pub eta: Vec<usize>,
    /// loops z_i at vertices 1..p-1
    pub z: Vec<usize>,
}

impl CpDict {
    /// Reads the dictionary off the canonical presentation from `build_cp`.
    pub fn from_presented(pa: &PresentedAlgebra) -> Result<CpDict> {
        let p = pa.alg.p();
        let pn = p as usize;
        let by_label = |l: &str| -> Result<usize> {
            pa.alg
                .labels()
                .iter()
                .position(|x| x == l)
                .ok_or_else(|| AlgError::Structure(format!("missing basis element {}", l)))
        };
        let mut e = Vec::new();
        let mut xi = Vec::new();
        let mut eta = Vec::new();
        let mut z = Vec::new();
        for i in 1..=pn {
            e.push(by_label(&format!("e{}", i))?);
        }
        for i in 1..pn {
            xi.push(by_label(&format!("xi{}", i))?);
            eta.push(by_label(&format!("eta{}", i))?);
        }
        for i in 1..pn {
            // the loop at vertex i is the surviving path xi_i then eta_i
            z.push(by_label(&format!("xi{}.eta{}", i, i))?);
        }
        Ok(CpDict { p, e, xi, eta, z })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FiltrationShape {
    ThreeLayer,
    TwoLayerPlus,
    TwoLayerMinus,
    Single,
}

/// The (A-proj) shape of a projective indecomposable: composition factors
/// split by the f_n-degree of the path basis, with their vertex last
/// coordinates checked against {c-1, c, c+1}.
#[derive(Debug, Clone)]
pub struct FiltrationProfile {
    pub shape: FiltrationShape,
    pub c: i64,
    /// dims of the f_n-degree-0 part (top quotient worth)
    pub top_dim: usize,
    pub kplus_dim: usize,
    pub kminus_dim: usize,
    /// dims of the f_n-degree-2 part (the bottom copy)
    pub bottom_dim: usize,
}

pub fn filtration_profile(
    an: &PresentedAlgebra,
    audit_tuple: &[i64],
) -> Result<FiltrationProfile> {
    let p = an.alg.p();
    let n = an.quiver.grading_rank;
    let label = vertex_label(p, audit_tuple);
    let v = an
        .quiver
        .vertices
        .iter()
        .position(|x| *x == label)
        .ok_or_else(|| AlgError::UnknownVertex(label.clone()))?;
    let c = *audit_tuple.last().unwrap();
    if n == 0 {
        return Ok(FiltrationProfile {
            shape: FiltrationShape::Single,
            c,
            top_dim: 1,
            kplus_dim: 0,
            kminus_dim: 0,
            bottom_dim: 0,
        });
    }
    let proj = left_projective(&an.alg, v)?;
    let mut top_dim = 0;
    let mut kplus = 0;
    let mut kminus = 0;
    let mut bottom = 0;
    let degs = proj.degree.as_ref().expect("projectives of A_n are graded");
    for (mi, d) in degs.iter().enumerate() {
        // recover the target vertex's last coordinate from the left vertex
        let lv = proj.vpair.as_ref().expect("adapted")[mi].0 as usize;
        let tuple = &an.quiver.vertices[lv];
        let last: i64 = tuple.split('.').last().unwrap().parse().unwrap();
        let fn_deg = d[n - 1];
        match fn_deg {
            0 => {
                if last != c {
                    return Err(AlgError::ForeignLayer(last, c));
                }
                top_dim += 1;
            }
            1 => {
                if last == c + 1 {
                    kplus += 1;
                } else if last == c - 1 {
                    kminus += 1;
                } else {
                    return Err(AlgError::ForeignLayer(last, c));
                }
            }
            2 => {
                if last != c {
                    return Err(AlgError::ForeignLayer(last, c));
                }
                bottom += 1;
            }
            _ => return Err(AlgError::ForeignLayer(last, c)),
        }
    }
    let pi = p as i64;
    let shape = if c >= 1 && c <= pi - 2 {
        FiltrationShape::ThreeLayer
    } else if c == 0 {
        FiltrationShape::TwoLayerPlus
    } else {
        FiltrationShape::TwoLayerMinus
    };
    // the stated case shapes
    let ok = match shape {
        FiltrationShape::ThreeLayer => {
            kplus > 0 && kminus > 0 && bottom == top_dim
        }
        FiltrationShape::TwoLayerPlus => kminus == 0 && kplus > 0 && bottom == top_dim,
        FiltrationShape::TwoLayerMinus => kplus == 0 && kminus > 0 && bottom == 0,
        FiltrationShape::Single => true,
    };
    if !ok {
        return Err(AlgError::Structure(format!(
            "profile at {} does not match the case shape: top {}, K+ {}, K- {}, bottom {}",
            label, top_dim, kplus, kminus, bottom
        )));
    }
    Ok(FiltrationProfile { shape, c, top_dim, kplus_dim: kplus, kminus_dim: kminus, bottom_dim: bottom })
}

/// Structural cross-check of the inductive description of Q_n: the
/// last-coordinate slices are Q_{n-1}-shaped and the f_n arrows between
/// adjacent slices biject out of the sublevel {a_{n-1} != p-1}.
pub fn qn_slice_invariant(p: u64, n: usize) -> Result<()> {
    if n == 0 {
        return Ok(());
    }
    let q = build_qn(p, n);
    let qprev = build_qn(p, n - 1);
    let tuples: Vec<VertexTuple> = q
        .vertices
        .iter()
        .map(|s| {
            let mut t: VertexTuple = s.split('.').map(|x| x.parse().unwrap()).collect();
            if p == 2 {
                t.insert(0, 0);
            }
            t
        })
        .collect();
    let pi = p as i64;
    for c in 0..pi {
        let slice: Vec<usize> =
            (0..tuples.len()).filter(|&i| tuples[i][n] == c).collect();
        if slice.len() != qprev.vertices.len() {
            return Err(AlgError::Structure(format!(
                "slice {} has {} vertices, expected {}",
                c,
                slice.len(),
                qprev.vertices.len()
            )));
        }
        let inner = q
            .arrows
            .iter()
            .filter(|a| {
                a.degree[n - 1] == 0 && tuples[a.src][n] == c && tuples[a.tgt][n] == c
            })
            .count();
        if inner != qprev.arrows.len() {
            return Err(AlgError::Structure(format!(
                "slice {} has {} inner arrows, expected {}",
                c,
                inner,
                qprev.arrows.len()
            )));
        }
        // f_n arrows out of the slice: one per vertex with a_{n-1} != p-1
        for eps in [1i64, -1] {
            if c + eps < 0 || c + eps >= pi {
                continue;
            }
            let outgoing = q
                .arrows
                .iter()
                .filter(|a| {
                    a.degree[n - 1] == 1
                        && tuples[a.src][n] == c
                        && tuples[a.tgt][n] == c + eps
                })
                .count();
            let eligible = slice.iter().filter(|&&i| tuples[i][n - 1] != pi - 1).count();
            if outgoing != eligible {
                return Err(AlgError::Structure(format!(
                    "slice {}: {} f_n arrows to slice {}, expected {}",
                    c,
                    outgoing,
                    c + eps,
                    eligible
                )));
            }
        }
    }
    Ok(())
}

/// Convenience: the projective left module over A_n at a tuple vertex.
pub fn an_projective(an: &PresentedAlgebra, tuple: &[i64]) -> Result<Bimodule> {
    let label = vertex_label(an.alg.p(), tuple);
    let v = an
        .quiver
        .vertices
        .iter()
        .position(|x| *x == label)
        .ok_or(AlgError::UnknownVertex(label))?;
    left_projective(&an.alg, v)
}

pub fn an_ref(an: &PresentedAlgebra) -> AlgRef {
    an.alg.clone()
}
