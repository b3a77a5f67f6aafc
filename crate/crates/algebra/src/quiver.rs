//! Quivers with relations and the graded basis construction.
//!
//! A presented algebra is built degree by degree: for every multidegree
//! below the cap and every vertex pair, the paths of that degree are listed
//! and the span of all relation instances u·r·v of the same degree is row
//! reduced against them. Non-pivot paths form the basis; finiteness is
//! certified by checking that every component on the cap boundary vanishes.
//!
//! Composition is right-to-left: in a product x*y the path y is applied
//! first, so x*y requires src(x) = tgt(y). Stored paths list arrows in
//! application order, and labels join arrow ids in that order.

use crate::table::{TableAlgebra, TableBuilder};
use crate::{AlgError, Result};
use fp::{SparseVec, SpanBuilder};
use std::collections::{BTreeMap, HashMap};

#[derive(Clone, Debug)]
pub struct Arrow {
    pub id: String,
    pub src: usize,
    pub tgt: usize,
    pub degree: Vec<i64>,
}

#[derive(Clone, Debug)]
pub struct Quiver {
    pub vertices: Vec<String>,
    pub arrows: Vec<Arrow>,
    pub grading_rank: usize,
}

impl Quiver {
    pub fn validate(&self) -> Result<()> {
        for a in &self.arrows {
            if a.src >= self.vertices.len() || a.tgt >= self.vertices.len() {
                return Err(AlgError::Structure(format!("arrow {} has a dangling endpoint", a.id)));
            }
            if a.degree.len() != self.grading_rank {
                return Err(AlgError::Structure(format!("arrow {} has wrong degree rank", a.id)));
            }
        }
        let mut ids: Vec<&str> = self.arrows.iter().map(|a| a.id.as_str()).collect();
        ids.sort();
        ids.dedup();
        if ids.len() != self.arrows.len() {
            return Err(AlgError::Structure("duplicate arrow ids".into()));
        }
        Ok(())
    }

    pub fn arrow_index(&self, id: &str) -> Option<usize> {
        self.arrows.iter().position(|a| a.id == id)
    }
}

/// A formal F_p-linear combination of composable paths with common source,
/// target and multidegree. Paths are arrow index sequences in application
/// order; a term may be empty only for the zero relation.
#[derive(Clone, Debug)]
pub struct Relation {
    pub terms: Vec<(u64, Vec<usize>)>,
}

impl Relation {
    pub fn monomial(path: Vec<usize>) -> Self {
        Relation { terms: vec![(1, path)] }
    }

    pub fn difference(a: Vec<usize>, b: Vec<usize>, p: u64) -> Self {
        Relation { terms: vec![(1, a), (p - 1, b)] }
    }
}

#[derive(Clone, Debug, Default)]
pub struct RelationSet(pub Vec<Relation>);

fn path_src(q: &Quiver, path: &[usize], fallback: usize) -> usize {
    path.first().map_or(fallback, |&a| q.arrows[a].src)
}

fn path_tgt(q: &Quiver, path: &[usize], fallback: usize) -> usize {
    path.last().map_or(fallback, |&a| q.arrows[a].tgt)
}

fn path_degree(q: &Quiver, path: &[usize]) -> Vec<i64> {
    let mut d = vec![0i64; q.grading_rank];
    for &a in path {
        for (x, y) in d.iter_mut().zip(&q.arrows[a].degree) {
            *x += *y;
        }
    }
    d
}

fn path_composable(q: &Quiver, path: &[usize]) -> bool {
    path.windows(2).all(|w| q.arrows[w[0]].tgt == q.arrows[w[1]].src)
}

/// A finite-dimensional multigraded algebra presented by quiver and
/// relations, with the chosen path basis exposed.
pub struct PresentedAlgebra {
    pub alg: crate::bimodule::AlgRef,
    pub quiver: Quiver,
    /// per basis element: (source vertex, arrows in application order)
    pub basis_paths: Vec<(usize, Vec<usize>)>,
    /// class of each arrow in the algebra basis
    pub arrow_class: Vec<SparseVec>,
}

#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Debug)]
struct CompKey {
    degree: Vec<i64>,
    src: usize,
    tgt: usize,
}

struct Component {
    paths: Vec<Vec<usize>>,                 // arrow sequences, lex order by (len, seq)
    index: HashMap<Vec<usize>, usize>,
    span: SpanBuilder,
    basis_cols: Vec<usize>,                 // non-pivot columns after reduction
    global: Vec<usize>,                     // global basis index per basis_col
}

/// Builds the algebra F_p Q / I degreewise. Relations must be homogeneous;
/// all arrow degrees must be unit vectors so that boundary vanishing
/// certifies finite dimensionality.
pub fn build_algebra(
    quiver: &Quiver,
    rels: &RelationSet,
    p: u64,
    degree_cap: &[i64],
) -> Result<PresentedAlgebra> {
    quiver.validate()?;
    if !fp::is_prime(p) {
        return Err(AlgError::Fp(fp::FpError::NotPrime(p)));
    }
    if degree_cap.len() != quiver.grading_rank {
        return Err(AlgError::Structure("degree cap has wrong rank".into()));
    }
    for a in &quiver.arrows {
        let units = a.degree.iter().filter(|&&d| d == 1).count();
        let zeros = a.degree.iter().filter(|&&d| d == 0).count();
        if units != 1 || units + zeros != a.degree.len() {
            return Err(AlgError::Structure(format!(
                "arrow {} must have a unit multidegree for the finiteness certificate",
                a.id
            )));
        }
        if a.degree.iter().zip(degree_cap).any(|(d, c)| d > c) {
            return Err(AlgError::CapTooSmall(degree_cap.to_vec()));
        }
    }
    // validate relations: composable, homogeneous
    for rel in &rels.0 {
        let mut sig: Option<(usize, usize, Vec<i64>)> = None;
        for (_, path) in &rel.terms {
            if path.is_empty() {
                return Err(AlgError::InhomogeneousRelation("empty path in relation".into()));
            }
            if !path_composable(quiver, path) {
                return Err(AlgError::InhomogeneousRelation(format!(
                    "non-composable path {:?}",
                    path
                )));
            }
            let s = (
                path_src(quiver, path, usize::MAX),
                path_tgt(quiver, path, usize::MAX),
                path_degree(quiver, path),
            );
            match &sig {
                None => sig = Some(s),
                Some(prev) if *prev != s => {
                    return Err(AlgError::InhomogeneousRelation(format!("{:?}", rel.terms)))
                }
                _ => {}
            }
        }
    }

    // enumerate paths of degree <= cap, grouped by (degree, src, tgt)
    let mut comps: BTreeMap<CompKey, Component> = BTreeMap::new();
    {
        let mut frontier: Vec<(usize, Vec<usize>)> =
            (0..quiver.vertices.len()).map(|v| (v, Vec::new())).collect();
        let mut all_paths: Vec<(usize, Vec<usize>)> = frontier.clone();
        while !frontier.is_empty() {
            let mut next = Vec::new();
            for (src, path) in &frontier {
                let end = path_tgt(quiver, path, *src);
                for (ai, a) in quiver.arrows.iter().enumerate() {
                    if a.src != end {
                        continue;
                    }
                    let mut np = path.clone();
                    np.push(ai);
                    let d = path_degree(quiver, &np);
                    if d.iter().zip(degree_cap).all(|(x, c)| x <= c) {
                        next.push((*src, np));
                    }
                }
            }
            all_paths.extend(next.iter().cloned());
            frontier = next;
        }
        all_paths.sort_by(|a, b| (a.1.len(), &a.1, a.0).cmp(&(b.1.len(), &b.1, b.0)));
        for (src, path) in all_paths {
            let key = CompKey {
                degree: path_degree(quiver, &path),
                src,
                tgt: path_tgt(quiver, &path, src),
            };
            let comp = comps.entry(key).or_insert_with(|| Component {
                paths: Vec::new(),
                index: HashMap::new(),
                span: SpanBuilder::new(0, p),
                basis_cols: Vec::new(),
                global: Vec::new(),
            });
            // distinct sources cannot share a component, so the arrow
            // sequence alone identifies the path within it
            comp.index.insert(path.clone(), comp.paths.len());
            comp.paths.push(path);
        }
        for comp in comps.values_mut() {
            comp.span = SpanBuilder::new(comp.paths.len(), p);
        }
    }

    // relation instances: pre into src(rel), post out of tgt(rel)
    for rel in &rels.0 {
        let (rs, rt, rd) = {
            let (_, path) = &rel.terms[0];
            (
                path_src(quiver, path, usize::MAX),
                path_tgt(quiver, path, usize::MAX),
                path_degree(quiver, path),
            )
        };
        // collect candidate pres (tgt = rs) and posts (src = rt) with room in the cap
        let mut pres: Vec<(usize, Vec<usize>)> = Vec::new();
        let mut posts: Vec<Vec<usize>> = Vec::new();
        for (key, comp) in &comps {
            if key.tgt == rs
                && key.degree.iter().zip(&rd).zip(degree_cap).all(|((a, b), c)| a + b <= *c)
            {
                for path in &comp.paths {
                    pres.push((key.src, path.clone()));
                }
            }
            if key.src == rt
                && key.degree.iter().zip(&rd).zip(degree_cap).all(|((a, b), c)| a + b <= *c)
            {
                for path in &comp.paths {
                    posts.push(path.clone());
                }
            }
        }
        for (psrc, pre) in &pres {
            let pre_deg = path_degree(quiver, pre);
            for post in &posts {
                let post_deg = path_degree(quiver, post);
                let total: Vec<i64> =
                    pre_deg.iter().zip(&rd).zip(&post_deg).map(|((a, b), c)| a + b + c).collect();
                if total.iter().zip(degree_cap).any(|(d, c)| d > c) {
                    continue;
                }
                let key = CompKey {
                    degree: total,
                    src: *psrc,
                    tgt: path_tgt(quiver, post, rt),
                };
                // build the instance row
                let comp = comps.get_mut(&key).expect("component exists for instance");
                let mut row: SparseVec = Vec::new();
                for (coeff, term) in &rel.terms {
                    let mut w = pre.clone();
                    w.extend_from_slice(term);
                    w.extend_from_slice(post);
                    let idx = *comp.index.get(&w).expect("instance path was enumerated");
                    row.push((idx, *coeff % p));
                }
                row.sort();
                // merge duplicate indices
                let mut merged: SparseVec = Vec::new();
                for (i, c) in row {
                    match merged.last_mut() {
                        Some((j, cc)) if *j == i => *cc = (*cc + c) % p,
                        _ => merged.push((i, c)),
                    }
                }
                merged.retain(|&(_, c)| c != 0);
                comp.span.insert_sparse(&merged);
            }
        }
    }

    // choose basis (non-pivot paths), check the boundary, assign global indices
    let mut global = 0usize;
    let mut basis_paths = Vec::new();
    let mut labels = Vec::new();
    let mut degrees = Vec::new();
    let mut vpairs = Vec::new();
    let mut verts = Vec::new();
    for (key, comp) in comps.iter_mut() {
        let pivots: Vec<usize> = comp.span.pivots().to_vec();
        comp.basis_cols = (0..comp.paths.len()).filter(|c| !pivots.contains(c)).collect();
        let on_boundary = key.degree.iter().zip(degree_cap).any(|(d, c)| d == c);
        if on_boundary && !comp.basis_cols.is_empty() {
            return Err(AlgError::CapTooSmall(key.degree.clone()));
        }
        for &c in &comp.basis_cols {
            comp.global.push(global);
            let path = comp.paths[c].clone();
            if path.is_empty() {
                verts.push(global);
                labels.push(quiver.vertices[key.src].clone());
            } else {
                labels.push(
                    path.iter().map(|&a| quiver.arrows[a].id.clone()).collect::<Vec<_>>().join("."),
                );
            }
            basis_paths.push((key.src, path));
            degrees.push(key.degree.clone());
            vpairs.push((key.tgt, key.src));
            global += 1;
        }
    }
    if verts.len() != quiver.vertices.len() {
        return Err(AlgError::Structure(
            "a vertex idempotent was killed by the relations".into(),
        ));
    }

    // vertex v's position among verts equals v because components are
    // ordered with degree 0 first and (src, tgt) increasing
    let vert_of_vertex: Vec<usize> = {
        let mut m = vec![usize::MAX; quiver.vertices.len()];
        for (pos, &g) in verts.iter().enumerate() {
            let (src, _) = &basis_paths[g];
            m[*src] = pos;
        }
        m
    };

    let reduce_in = |comp: &Component, col: usize| -> SparseVec {
        let mut dense = vec![0u64; comp.paths.len()];
        dense[col] = 1;
        comp.span.reduce(&mut dense);
        comp
            .basis_cols
            .iter()
            .enumerate()
            .filter(|&(_, &c)| dense[c] != 0)
            .map(|(k, &c)| (comp.global[k], dense[c]))
            .collect()
    };

    // structure constants
    let mut products = BTreeMap::new();
    for i in 0..global {
        let (si, wi) = &basis_paths[i];
        for j in 0..global {
            let (sj, wj) = &basis_paths[j];
            // x_i * x_j: apply w_j first; requires src(w_i) = tgt(w_j)
            if *si != path_tgt(quiver, wj, *sj) {
                continue;
            }
            let mut w = wj.clone();
            w.extend_from_slice(wi);
            let d: Vec<i64> =
                degrees[i].iter().zip(&degrees[j]).map(|(a, b)| a + b).collect();
            if d.iter().zip(degree_cap).any(|(x, c)| x > c) {
                continue; // boundary vanishing certified the component is zero
            }
            let key = CompKey { degree: d, src: *sj, tgt: path_tgt(quiver, wi, *si) };
            let comp = &comps[&key];
            let col = *comp.index.get(&w).expect("product path enumerated");
            let v = reduce_in(comp, col);
            if !v.is_empty() {
                products.insert((i, j), v);
            }
        }
    }

    let mut arrow_class = Vec::new();
    for (ai, a) in quiver.arrows.iter().enumerate() {
        let key = CompKey { degree: a.degree.clone(), src: a.src, tgt: a.tgt };
        let comp = &comps[&key];
        let col = *comp.index.get(&vec![ai]).expect("arrow path enumerated");
        arrow_class.push(reduce_in(comp, col));
    }

    let mut gens: Vec<usize> = verts.clone();
    for (i, d) in degrees.iter().enumerate() {
        if d.iter().sum::<i64>() == 1 {
            gens.push(i);
        }
    }

    let alg = TableBuilder {
        p,
        dim: global,
        products,
        verts,
        vpair: vpairs.iter().map(|&(t, s)| (vert_of_vertex[t], vert_of_vertex[s])).collect(),
        degree: Some(degrees),
        grading_rank: quiver.grading_rank,
        labels,
        gens: Some(gens),
    }
    .build();

    Ok(PresentedAlgebra {
        alg: std::rc::Rc::new(alg),
        quiver: quiver.clone(),
        basis_paths,
        arrow_class,
    })
}

/// The left projective module A e_v with the left multiplication action.
pub fn left_projective(alg: &crate::bimodule::AlgRef, v: usize) -> Result<crate::bimodule::Bimodule> {
    if v >= alg.n_verts() {
        return Err(AlgError::UnknownVertex(format!("vertex {}", v)));
    }
    let members: Vec<usize> = (0..alg.dim()).filter(|&i| alg.vpair(i).1 == v).collect();
    let pos: BTreeMap<usize, usize> = members.iter().enumerate().map(|(n, &o)| (o, n)).collect();
    let act: Vec<Vec<SparseVec>> = (0..alg.dim())
        .map(|a| {
            members
                .iter()
                .map(|&m| {
                    alg.mul_basis(a, m)
                        .iter()
                        .map(|&(k, c)| (pos[&k], c))
                        .collect()
                })
                .collect()
        })
        .collect();
    let degree = alg
        .degrees()
        .map(|d| members.iter().map(|&m| d[m].clone()).collect());
    Ok(crate::bimodule::Bimodule::left_module(alg, act, members.len(), degree))
}

/// Radical layer dimension vectors of a left module: for each layer
/// M_k / M_{k+1}, the multiplicity of each vertex's simple. The radical is
/// the positive-degree span for tightly graded algebras, or an explicitly
/// supplied basis.
pub fn radical_layers(
    alg: &crate::bimodule::AlgRef,
    m: &crate::bimodule::Bimodule,
    explicit_radical: Option<&[SparseVec]>,
) -> Result<Vec<Vec<usize>>> {
    let p = alg.p();
    let rad: Vec<SparseVec> = match explicit_radical {
        Some(r) => r.to_vec(),
        None => alg
            .positive_part()
            .ok_or(AlgError::NoRadical)?
            .into_iter()
            .map(|i| vec![(i, 1)])
            .collect(),
    };
    let vertex_dims = |rows: &[Vec<u64>]| -> Vec<usize> {
        (0..alg.n_verts())
            .map(|v| {
                let ev: SparseVec = vec![(alg.verts()[v] as usize, 1)];
                let mut span = SpanBuilder::new(m.dim, p);
                for row in rows {
                    let sparse: SparseVec =
                        row.iter().enumerate().filter(|&(_, &c)| c != 0).map(|(i, &c)| (i, c)).collect();
                    let img = m.act_left_vec(&ev, &sparse);
                    span.insert_sparse(&img);
                }
                span.rank()
            })
            .collect()
    };
    let mut current: Vec<Vec<u64>> = (0..m.dim)
        .map(|i| {
            let mut v = vec![0u64; m.dim];
            v[i] = 1;
            v
        })
        .collect();
    let mut layers = Vec::new();
    let mut prev_dims = vertex_dims(&current);
    while !current.is_empty() {
        // next = rad . current
        let mut span = SpanBuilder::new(m.dim, p);
        for row in &current {
            let sparse: SparseVec =
                row.iter().enumerate().filter(|&(_, &c)| c != 0).map(|(i, &c)| (i, c)).collect();
            for r in &rad {
                let img = m.act_left_vec(r, &sparse);
                span.insert_sparse(&img);
            }
        }
        let next_mat = span.as_mat();
        let next: Vec<Vec<u64>> = (0..next_mat.rows).map(|r| next_mat.row(r).to_vec()).collect();
        let next_dims = vertex_dims(&next);
        let layer: Vec<usize> =
            prev_dims.iter().zip(&next_dims).map(|(a, b)| a - b).collect();
        if layer.iter().all(|&x| x == 0) && !next.is_empty() {
            return Err(AlgError::Structure(
                "radical chain stalled; radical not nilpotent on this module".into(),
            ));
        }
        layers.push(layer);
        if next.is_empty() {
            break;
        }
        current = next;
        prev_dims = next_dims;
    }
    Ok(layers)
}

impl PresentedAlgebra {
    /// Bilinear extension of the structure constants.
    pub fn multiply(&self, x: &SparseVec, y: &SparseVec) -> SparseVec {
        self.alg.mul_vec(x, y)
    }

    /// Class of a path given by arrow ids in application order.
    pub fn path_class(&self, ids: &[&str]) -> Option<SparseVec> {
        let mut acc: Option<SparseVec> = None;
        for id in ids {
            let ai = self.quiver.arrow_index(id)?;
            let cls = self.arrow_class[ai].clone();
            acc = Some(match acc {
                None => cls,
                Some(prev) => self.alg.mul_vec(&cls, &prev),
            });
        }
        acc
    }

    pub fn vertex_idempotent(&self, v: usize) -> SparseVec {
        vec![(self.alg.verts()[v] as usize, 1)]
    }
}
