//! Folded subgroup graphs for finitely generated subgroups of `F(a, b)`.
//!
//! A subgroup is represented by its Stallings graph: a based, connected,
//! folded graph with edges labelled `a` or `b`. An edge `u -a-> v` is read
//! as `a` from `u` and as `A` from `v`. Membership is a closed reading at the
//! base; conjugacy into the subgroup is a closed reading of the cyclic core
//! of the word anywhere on the cyclic core of the graph.
//!
//! Graphs are stored in a canonical numbering (breadth-first from the base,
//! neighbours visited in the order a-out, a-in, b-out, b-in), so two graphs
//! of the same subgroup compare equal with `==`.

use std::collections::{BTreeSet, VecDeque};

use serde::Serialize;
use thiserror::Error;

use crate::word::{CyclicWord, Letter, Word};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum StallingsError {
    #[error("generator {0} is the empty word")]
    EmptyGenerator(usize),
    #[error("the subgroup argument needs p, q >= 2; got p={p}, q={q}")]
    Domain { p: u32, q: u32 },
    #[error("power bound must be at least 1")]
    ZeroPowerBound,
}

/// Directed edge `from -label-> to`, with `label` 0 for `a` and 1 for `b`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub struct Edge {
    pub from: usize,
    pub label: usize,
    pub to: usize,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SubgroupGraph {
    vertex_count: usize,
    edges: Vec<Edge>,
    out: Vec<[Option<usize>; 2]>,
    inc: Vec<[Option<usize>; 2]>,
}

struct UnionFind(Vec<usize>);

impl UnionFind {
    fn find(&mut self, x: usize) -> usize {
        let mut root = x;
        while self.0[root] != root {
            root = self.0[root];
        }
        let mut y = x;
        while self.0[y] != root {
            let next = self.0[y];
            self.0[y] = root;
            y = next;
        }
        root
    }

    fn union(&mut self, x: usize, y: usize) -> bool {
        let (rx, ry) = (self.find(x), self.find(y));
        if rx == ry {
            return false;
        }
        let (lo, hi) = if rx < ry { (rx, ry) } else { (ry, rx) };
        self.0[hi] = lo;
        true
    }
}

impl SubgroupGraph {
    /// The base vertex is always vertex 0.
    pub const BASE: usize = 0;

    /// Wedge of one loop per generator at the base, folded to completion.
    pub fn build(generators: &[Word]) -> Result<SubgroupGraph, StallingsError> {
        let mut vertex_count = 1;
        let mut edges = Vec::new();
        for (i, g) in generators.iter().enumerate() {
            if g.is_empty() {
                return Err(StallingsError::EmptyGenerator(i));
            }
            let letters = g.letters();
            let mut at = Self::BASE;
            for (j, &x) in letters.iter().enumerate() {
                let next = if j + 1 == letters.len() {
                    Self::BASE
                } else {
                    vertex_count += 1;
                    vertex_count - 1
                };
                edges.push(if x.is_positive() {
                    Edge { from: at, label: x.generator(), to: next }
                } else {
                    Edge { from: next, label: x.generator(), to: at }
                });
                at = next;
            }
        }
        Ok(Self::fold(vertex_count, edges))
    }

    fn fold(vertex_count: usize, mut edges: Vec<Edge>) -> SubgroupGraph {
        let mut uf = UnionFind((0..vertex_count).collect());
        loop {
            for e in edges.iter_mut() {
                e.from = uf.find(e.from);
                e.to = uf.find(e.to);
            }
            edges.sort();
            edges.dedup();
            let mut out = vec![[None; 2]; vertex_count];
            let mut inc = vec![[None; 2]; vertex_count];
            let mut merged = false;
            for e in &edges {
                match out[e.from][e.label] {
                    Some(t) if t != e.to => merged |= uf.union(t, e.to),
                    _ => out[e.from][e.label] = Some(e.to),
                }
                match inc[e.to][e.label] {
                    Some(s) if s != e.from => merged |= uf.union(s, e.from),
                    _ => inc[e.to][e.label] = Some(e.from),
                }
            }
            if !merged {
                break;
            }
        }
        let base = uf.find(Self::BASE);
        Self::canonical(base, vertex_count, &edges)
    }

    fn canonical(base: usize, vertex_count: usize, edges: &[Edge]) -> SubgroupGraph {
        let mut out = vec![[None; 2]; vertex_count];
        let mut inc = vec![[None; 2]; vertex_count];
        for e in edges {
            out[e.from][e.label] = Some(e.to);
            inc[e.to][e.label] = Some(e.from);
        }
        let mut label = vec![usize::MAX; vertex_count];
        let mut order = Vec::new();
        let mut queue = VecDeque::from([base]);
        label[base] = 0;
        order.push(base);
        while let Some(v) = queue.pop_front() {
            let neighbours = [out[v][0], inc[v][0], out[v][1], inc[v][1]];
            for w in neighbours.into_iter().flatten() {
                if label[w] == usize::MAX {
                    label[w] = order.len();
                    order.push(w);
                    queue.push_back(w);
                }
            }
        }
        let n = order.len();
        let mut new_edges: Vec<Edge> = edges
            .iter()
            .filter(|e| label[e.from] != usize::MAX)
            .map(|e| Edge {
                from: label[e.from],
                label: e.label,
                to: label[e.to],
            })
            .collect();
        new_edges.sort();
        let mut out = vec![[None; 2]; n];
        let mut inc = vec![[None; 2]; n];
        for e in &new_edges {
            out[e.from][e.label] = Some(e.to);
            inc[e.to][e.label] = Some(e.from);
        }
        SubgroupGraph {
            vertex_count: n,
            edges: new_edges,
            out,
            inc,
        }
    }

    pub fn vertex_count(&self) -> usize {
        self.vertex_count
    }

    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    /// Free rank of the subgroup, `|E| - |V| + 1`.
    pub fn rank(&self) -> usize {
        self.edges.len() + 1 - self.vertex_count
    }

    /// No vertex has two outgoing or two incoming edges with one label.
    pub fn is_folded(&self) -> bool {
        let mut seen_out = BTreeSet::new();
        let mut seen_in = BTreeSet::new();
        self.edges
            .iter()
            .all(|e| seen_out.insert((e.from, e.label)) && seen_in.insert((e.to, e.label)))
    }

    fn step(&self, v: usize, x: Letter) -> Option<usize> {
        let g = x.generator();
        if x.is_positive() {
            self.out[v][g]
        } else {
            self.inc[v][g]
        }
    }

    /// End of the unique path from `start` reading `letters`, if any.
    pub fn read(&self, start: usize, letters: &[Letter]) -> Option<usize> {
        letters.iter().try_fold(start, |v, &x| self.step(v, x))
    }

    pub fn is_member(&self, w: &Word) -> bool {
        self.read(Self::BASE, w.letters()) == Some(Self::BASE)
    }

    /// Vertices left after repeatedly deleting vertices of degree at most
    /// one (loops count twice), the base included.
    pub fn core_vertices(&self) -> Vec<usize> {
        let mut alive = vec![true; self.vertex_count];
        let mut edge_alive = vec![true; self.edges.len()];
        loop {
            let mut degree = vec![0usize; self.vertex_count];
            for (e, _) in self.edges.iter().zip(&edge_alive).filter(|(_, &a)| a) {
                degree[e.from] += 1;
                degree[e.to] += 1;
            }
            let doomed: Vec<usize> = (0..self.vertex_count).filter(|&v| alive[v] && degree[v] <= 1).collect();
            if doomed.is_empty() {
                break;
            }
            for v in doomed {
                alive[v] = false;
            }
            for (e, a) in self.edges.iter().zip(edge_alive.iter_mut()) {
                if !alive[e.from] || !alive[e.to] {
                    *a = false;
                }
            }
        }
        (0..self.vertex_count).filter(|&v| alive[v]).collect()
    }

    /// True iff some conjugate of `w` lies in the subgroup.
    pub fn is_conjugate_into(&self, w: &Word) -> bool {
        let (c, _) = w.cyclically_reduce();
        if c.is_empty() {
            return true;
        }
        self.core_vertices()
            .into_iter()
            .any(|v| self.read(v, c.letters()) == Some(v))
    }
}

/// Shorthand for [`SubgroupGraph::build`].
pub fn build_core(generators: &[Word]) -> Result<SubgroupGraph, StallingsError> {
    SubgroupGraph::build(generators)
}

/// Free bases `{a^{p+1}, b^{q+1}A}` and `{a^{p+1}B, b^{q+1}}` of the two
/// boundary subgroups.
pub fn boundary_subgroups(p: u32, q: u32) -> [Vec<Word>; 2] {
    let a = Word::reduce([Letter::A]);
    let b = Word::reduce([Letter::B]);
    let ap = a.pow(p as usize + 1);
    let bq = b.pow(q as usize + 1);
    [
        vec![ap.clone(), bq.concat(&a.inverse())],
        vec![ap.concat(&b.inverse()), bq],
    ]
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct ConjugacyResult {
    /// 0 for `⟨a^{p+1}, b^{q+1}A⟩`, 1 for `⟨a^{p+1}B, b^{q+1}⟩`.
    pub subgroup: usize,
    pub power: u32,
    /// `γ^power` is conjugate into the subgroup (a failure).
    pub conjugate: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Lemma5Report {
    pub p: u32,
    pub q: u32,
    pub gamma: CyclicWord,
    /// `γ` has no letter square in any rotation, which rules out every
    /// power at once.
    pub structural_pass: bool,
    pub conjugacy_results: Vec<ConjugacyResult>,
}

impl Lemma5Report {
    pub fn passed(&self) -> bool {
        self.structural_pass && self.conjugacy_results.iter().all(|r| !r.conjugate)
    }

    pub fn failures(&self) -> impl Iterator<Item = &ConjugacyResult> {
        self.conjugacy_results.iter().filter(|r| r.conjugate)
    }
}

/// Checks that no power `γ^v` is conjugate into either boundary subgroup:
/// structurally for all `v`, and explicitly for `v = 1..=v_max`.
pub fn lemma5_check(p: u32, q: u32, gamma: &CyclicWord, v_max: u32) -> Result<Lemma5Report, StallingsError> {
    if p < 2 || q < 2 {
        return Err(StallingsError::Domain { p, q });
    }
    if v_max == 0 {
        return Err(StallingsError::ZeroPowerBound);
    }
    let graphs = boundary_subgroups(p, q).map(|gens| SubgroupGraph::build(&gens).expect("nonempty generators"));
    let mut conjugacy_results = Vec::new();
    for (subgroup, graph) in graphs.iter().enumerate() {
        for power in 1..=v_max {
            let word = gamma.as_word().pow(power as usize);
            conjugacy_results.push(ConjugacyResult {
                subgroup,
                power,
                conjugate: graph.is_conjugate_into(&word),
            });
        }
    }
    Ok(Lemma5Report {
        p,
        q,
        gamma: gamma.clone(),
        structural_pass: !gamma.has_letter_square(),
        conjugacy_results,
    })
}
