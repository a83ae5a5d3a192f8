//! Orthogonality hypergraphs (Greechie diagrams): atoms, contexts and
//! incidence, built from exact rays or given combinatorially.

use std::collections::{BTreeSet, HashMap};

use num_bigint::BigInt;
use rand::seq::SliceRandom;
use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exact::{format_rational, inner_product, parse_rational, Ray};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Atom {
    pub id: usize,
    /// `None` for purely combinatorial diagrams.
    pub ray: Option<Ray>,
    /// Primary label first, then aliases merged by projective identity.
    pub labels: Vec<String>,
}

impl Atom {
    pub fn label(&self) -> &str {
        &self.labels[0]
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Context {
    pub id: usize,
    pub label: String,
    pub atoms: Vec<usize>,
}

/// A context given by label lists, before resolution against rays.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ContextSpec {
    pub label: Option<String>,
    pub atoms: Vec<String>,
}

impl ContextSpec {
    pub fn new(label: &str, atoms: &[&str]) -> Self {
        Self { label: Some(label.to_string()), atoms: atoms.iter().map(|s| s.to_string()).collect() }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OrthoHypergraph {
    name: String,
    dimension: usize,
    atoms: Vec<Atom>,
    contexts: Vec<Context>,
    incidence: Vec<Vec<usize>>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct BuildReport {
    pub graph: OrthoHypergraph,
    pub warnings: Vec<String>,
}

impl OrthoHypergraph {
    fn assemble(name: String, dimension: usize, atoms: Vec<Atom>, contexts: Vec<Context>) -> Result<Self> {
        let mut seen = BTreeSet::new();
        for ctx in &contexts {
            if ctx.atoms.len() != dimension {
                return Err(Error::ContextSize {
                    context: ctx.label.clone(),
                    expected: dimension,
                    found: ctx.atoms.len(),
                });
            }
            let set: BTreeSet<usize> = ctx.atoms.iter().copied().collect();
            if set.len() != ctx.atoms.len() {
                return Err(Error::InvalidGraph(format!("context `{}` repeats an atom", ctx.label)));
            }
            if let Some(&bad) = set.iter().find(|&&a| a >= atoms.len()) {
                return Err(Error::InvalidGraph(format!("context `{}` references atom {bad}", ctx.label)));
            }
            if !seen.insert(set.into_iter().collect::<Vec<_>>()) {
                return Err(Error::DuplicateContext(ctx.label.clone()));
            }
        }
        let mut labels = BTreeSet::new();
        for atom in &atoms {
            for l in &atom.labels {
                if !labels.insert(l.as_str()) {
                    return Err(Error::InvalidGraph(format!("label `{l}` used twice")));
                }
            }
        }
        let mut incidence = vec![Vec::new(); atoms.len()];
        for ctx in &contexts {
            for &a in &ctx.atoms {
                incidence[a].push(ctx.id);
            }
        }
        Ok(Self { name, dimension, atoms, contexts, incidence })
    }

    /// Diagram without coordinates. Contexts must have `dimension` members.
    pub fn from_combinatorial(
        name: impl Into<String>,
        dimension: usize,
        atom_labels: &[&str],
        contexts: &[ContextSpec],
    ) -> Result<Self> {
        let atoms: Vec<Atom> =
            atom_labels.iter().enumerate().map(|(id, l)| Atom { id, ray: None, labels: vec![l.to_string()] }).collect();
        let index: HashMap<&str, usize> = atom_labels.iter().enumerate().map(|(i, l)| (*l, i)).collect();
        let contexts = contexts
            .iter()
            .enumerate()
            .map(|(id, spec)| {
                let atoms = spec
                    .atoms
                    .iter()
                    .map(|l| index.get(l.as_str()).copied().ok_or_else(|| Error::UnknownLabel(l.clone())))
                    .collect::<Result<Vec<_>>>()?;
                Ok(Context { id, label: spec.label.clone().unwrap_or_else(|| format!("c{id}")), atoms })
            })
            .collect::<Result<Vec<_>>>()?;
        Self::assemble(name.into(), dimension, atoms, contexts)
    }

    pub fn with_name(mut self, name: impl Into<String>) -> Self {
        self.name = name.into();
        self
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn dimension(&self) -> usize {
        self.dimension
    }

    pub fn atoms(&self) -> &[Atom] {
        &self.atoms
    }

    pub fn contexts(&self) -> &[Context] {
        &self.contexts
    }

    /// Context ids containing each atom.
    pub fn incidence(&self) -> &[Vec<usize>] {
        &self.incidence
    }

    pub fn multiplicity(&self, atom: usize) -> usize {
        self.incidence[atom].len()
    }

    pub fn has_coordinates(&self) -> bool {
        self.atoms.iter().all(|a| a.ray.is_some())
    }

    pub fn atom_by_label(&self, label: &str) -> Option<&Atom> {
        self.atoms.iter().find(|a| a.labels.iter().any(|l| l == label))
    }

    pub fn context_by_label(&self, label: &str) -> Option<&Context> {
        self.contexts.iter().find(|c| c.label == label)
    }

    /// Context memberships as plain index lists.
    pub fn context_lists(&self) -> Vec<Vec<usize>> {
        self.contexts.iter().map(|c| c.atoms.clone()).collect()
    }

    pub fn to_document(&self) -> GraphDocument {
        GraphDocument {
            name: self.name.clone(),
            dimension: self.dimension,
            atoms: self
                .atoms
                .iter()
                .map(|a| AtomRecord {
                    label: a.label().to_string(),
                    aliases: a.labels[1..].to_vec(),
                    coords: a.ray.as_ref().map(|r| r.coords().iter().map(format_rational).collect()),
                })
                .collect(),
            contexts: self
                .contexts
                .iter()
                .map(|c| ContextRecord {
                    label: c.label.clone(),
                    atoms: c.atoms.iter().map(|&a| self.atoms[a].label().to_string()).collect(),
                })
                .collect(),
        }
    }

    pub fn from_document(doc: &GraphDocument) -> Result<Self> {
        let specs: Vec<ContextSpec> =
            doc.contexts.iter().map(|c| ContextSpec { label: Some(c.label.clone()), atoms: c.atoms.clone() }).collect();
        let with_coords = doc.atoms.iter().filter(|a| a.coords.is_some()).count();
        let mut graph = if with_coords == 0 {
            let labels: Vec<&str> = doc.atoms.iter().map(|a| a.label.as_str()).collect();
            Self::from_combinatorial(doc.name.clone(), doc.dimension, &labels, &specs)?
        } else if with_coords == doc.atoms.len() {
            let rays = doc
                .atoms
                .iter()
                .map(|a| {
                    let coords = a
                        .coords
                        .as_ref()
                        .expect("checked")
                        .iter()
                        .map(|c| parse_rational(c).ok_or_else(|| Error::InvalidGraph(format!("bad coordinate `{c}`"))))
                        .collect::<Result<Vec<_>>>()?;
                    Ray::new(a.label.clone(), coords)
                })
                .collect::<Result<Vec<_>>>()?;
            if rays.iter().any(|r| r.dimension() != doc.dimension) {
                return Err(Error::InvalidGraph("ray dimension differs from `dimension`".into()));
            }
            let built = build_from_rays(&rays, Some(&specs))?;
            if built.graph.atoms.len() != doc.atoms.len() {
                return Err(Error::InvalidGraph("document lists the same atom twice".into()));
            }
            built.graph.with_name(doc.name.clone())
        } else {
            return Err(Error::InvalidGraph("either every atom or no atom must carry coordinates".into()));
        };
        for (atom, rec) in graph.atoms.iter_mut().zip(&doc.atoms) {
            atom.labels.extend(rec.aliases.iter().cloned());
        }
        // Re-run the label uniqueness check with aliases included.
        Self::assemble(graph.name, graph.dimension, graph.atoms, graph.contexts)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(&self.to_document()).expect("serializable") + "\n"
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let doc: GraphDocument =
            serde_json::from_str(text).map_err(|e| Error::Parse { line: e.line(), message: e.to_string() })?;
        Self::from_document(&doc)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct AtomRecord {
    pub label: String,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub aliases: Vec<String>,
    pub coords: Option<Vec<String>>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ContextRecord {
    pub label: String,
    pub atoms: Vec<String>,
}

/// Serialized hypergraph. Incidence is derived on load, never stored.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct GraphDocument {
    pub name: String,
    pub dimension: usize,
    pub atoms: Vec<AtomRecord>,
    pub contexts: Vec<ContextRecord>,
}

/// Builds a hypergraph from rays. Rays spanning the same line are merged
/// into one atom. With `explicit_contexts` the given contexts are checked
/// and used verbatim; otherwise contexts are the maximal cliques of the
/// orthogonality graph of size exactly `d`.
pub fn build_from_rays(rays: &[Ray], explicit_contexts: Option<&[ContextSpec]>) -> Result<BuildReport> {
    let first = rays.first().ok_or_else(|| Error::InvalidGraph("no rays given".into()))?;
    let dimension = first.dimension();
    if let Some(r) = rays.iter().find(|r| r.dimension() != dimension) {
        return Err(Error::DimensionMismatch { left: dimension, right: r.dimension() });
    }

    let mut atoms: Vec<Atom> = Vec::new();
    let mut by_key: HashMap<Vec<BigInt>, usize> = HashMap::new();
    let mut by_label: HashMap<String, usize> = HashMap::new();
    for ray in rays {
        let id = *by_key.entry(ray.canonical_key()).or_insert_with(|| {
            atoms.push(Atom { id: atoms.len(), ray: Some(ray.clone()), labels: Vec::new() });
            atoms.len() - 1
        });
        if by_label.insert(ray.label().to_string(), id).is_some() {
            return Err(Error::InvalidGraph(format!("label `{}` used twice", ray.label())));
        }
        atoms[id].labels.push(ray.label().to_string());
    }

    let orthogonal = |a: usize, b: usize| -> bool {
        let (x, y) = (atoms[a].ray.as_ref().unwrap(), atoms[b].ray.as_ref().unwrap());
        num_traits::Zero::is_zero(&inner_product(x, y).expect("same dimension"))
    };

    let mut warnings = Vec::new();
    let contexts = match explicit_contexts {
        Some(specs) => {
            let mut contexts = Vec::with_capacity(specs.len());
            for (id, spec) in specs.iter().enumerate() {
                let label = spec.label.clone().unwrap_or_else(|| format!("c{id}"));
                let members = spec
                    .atoms
                    .iter()
                    .map(|l| by_label.get(l).copied().ok_or_else(|| Error::UnknownLabel(l.clone())))
                    .collect::<Result<Vec<_>>>()?;
                for i in 0..members.len() {
                    for j in i + 1..members.len() {
                        if members[i] == members[j] {
                            return Err(Error::InvalidGraph(format!(
                                "context `{label}` lists `{}` and `{}`, which span the same ray",
                                spec.atoms[i], spec.atoms[j]
                            )));
                        }
                        if !orthogonal(members[i], members[j]) {
                            return Err(Error::NotOrthogonal {
                                context: label.clone(),
                                first: spec.atoms[i].clone(),
                                second: spec.atoms[j].clone(),
                            });
                        }
                    }
                }
                contexts.push(Context { id, label, atoms: members });
            }
            contexts
        }
        None => {
            let n = atoms.len();
            let adjacency: Vec<Vec<bool>> =
                (0..n).map(|i| (0..n).map(|j| i != j && orthogonal(i, j)).collect()).collect();
            let mut cliques = maximal_cliques(&adjacency);
            cliques.iter_mut().for_each(|c| c.sort_unstable());
            cliques.sort();
            let mut contexts = Vec::new();
            for clique in cliques {
                if clique.len() == dimension {
                    contexts.push(Context { id: contexts.len(), label: format!("c{}", contexts.len()), atoms: clique });
                } else if clique.len() > 1 {
                    let names: Vec<&str> = clique.iter().map(|&a| atoms[a].label()).collect();
                    warnings.push(format!(
                        "maximal orthogonal set {{{}}} has {} < {dimension} atoms; not a context",
                        names.join(", "),
                        clique.len()
                    ));
                }
            }
            contexts
        }
    };

    let graph = OrthoHypergraph::assemble(String::new(), dimension, atoms, contexts)?;
    for (atom, inc) in graph.atoms.iter().zip(&graph.incidence) {
        if inc.is_empty() {
            warnings.push(format!("atom `{}` lies in no context", atom.label()));
        }
    }
    Ok(BuildReport { graph, warnings })
}

/// Bron–Kerbosch with pivoting. Returns every maximal clique (isolated
/// vertices included as singletons).
pub fn maximal_cliques(adjacency: &[Vec<bool>]) -> Vec<Vec<usize>> {
    fn expand(adj: &[Vec<bool>], r: &mut Vec<usize>, p: Vec<usize>, mut x: Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if p.is_empty() {
            if x.is_empty() {
                out.push(r.clone());
            }
            return;
        }
        let pivot = *p.iter().chain(&x).max_by_key(|&&u| p.iter().filter(|&&v| adj[u][v]).count()).expect("p nonempty");
        let candidates: Vec<usize> = p.iter().copied().filter(|&v| !adj[pivot][v]).collect();
        let mut p = p;
        for v in candidates {
            r.push(v);
            let np = p.iter().copied().filter(|&w| adj[v][w]).collect();
            let nx = x.iter().copied().filter(|&w| adj[v][w]).collect();
            expand(adj, r, np, nx, out);
            r.pop();
            p.retain(|&w| w != v);
            x.push(v);
        }
    }
    let mut out = Vec::new();
    let all: Vec<usize> = (0..adjacency.len()).collect();
    expand(adjacency, &mut Vec::new(), all, Vec::new(), &mut out);
    out
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ParityReport {
    pub num_contexts: usize,
    pub atom_multiplicities: Vec<usize>,
    pub parity_obstruction: bool,
}

/// An odd number of contexts, each needing exactly one true atom, against
/// atoms that are each counted an even number of times: no two-valued
/// measure can exist.
pub fn parity_diagnostic(h: &OrthoHypergraph) -> ParityReport {
    let atom_multiplicities: Vec<usize> = h.incidence.iter().map(Vec::len).collect();
    let num_contexts = h.contexts.len();
    let parity_obstruction = num_contexts % 2 == 1 && atom_multiplicities.iter().all(|m| m % 2 == 0);
    ParityReport { num_contexts, atom_multiplicities, parity_obstruction }
}

pub const LIBRARY_NAMES: [&str; 4] = ["cabello18", "tripods2", "fourpods3", "twolink4"];

/// Built-in diagrams, in [`LIBRARY_NAMES`] order.
pub fn standard_library() -> Vec<OrthoHypergraph> {
    LIBRARY_NAMES.iter().map(|n| library_graph(n).expect("library entries are valid")).collect()
}

pub fn library_graph(name: &str) -> Option<OrthoHypergraph> {
    let graph = match name {
        "cabello18" => cabello18(),
        "tripods2" => tripods2(),
        "fourpods3" => fourpods3(),
        "twolink4" => twolink4(),
        _ => return None,
    };
    Some(graph.expect("built-in graph is valid").with_name(name))
}

fn from_int_rays(rays: &[(&str, &[i64])], contexts: &[(&str, &[&str])]) -> Result<OrthoHypergraph> {
    let rays = rays.iter().map(|(l, c)| Ray::from_ints(*l, c)).collect::<Result<Vec<_>>>()?;
    let specs: Vec<ContextSpec> = contexts.iter().map(|(l, a)| ContextSpec::new(l, a)).collect();
    Ok(build_from_rays(&rays, Some(&specs))?.graph)
}

/// The 18 rays in four dimensions with nine contexts, each ray in two.
pub fn cabello18_rays() -> Vec<Ray> {
    CABELLO18_RAYS.iter().map(|(l, c)| Ray::from_ints(*l, c).expect("valid ray")).collect()
}

const CABELLO18_RAYS: [(&str, &[i64]); 18] = [
    ("A", &[0, 0, 1, -1]),
    ("B", &[1, -1, 0, 0]),
    ("C", &[1, 1, -1, -1]),
    ("D", &[1, 1, 1, 1]),
    ("E", &[1, -1, 1, -1]),
    ("F", &[1, 0, -1, 0]),
    ("G", &[0, 1, 0, -1]),
    ("H", &[1, 0, 1, 0]),
    ("I", &[1, 1, -1, 1]),
    ("J", &[-1, 1, 1, 1]),
    ("K", &[1, 1, 1, -1]),
    ("L", &[1, 0, 0, 1]),
    ("M", &[0, 1, -1, 0]),
    ("N", &[0, 1, 1, 0]),
    ("O", &[0, 0, 0, 1]),
    ("P", &[1, 0, 0, 0]),
    ("Q", &[0, 1, 0, 0]),
    ("R", &[0, 0, 1, 1]),
];

pub const CABELLO18_CONTEXTS: [(&str, &[&str]); 9] = [
    ("a", &["A", "B", "C", "D"]),
    ("b", &["D", "E", "F", "G"]),
    ("c", &["G", "H", "I", "J"]),
    ("d", &["J", "K", "L", "M"]),
    ("e", &["M", "N", "O", "P"]),
    ("f", &["P", "Q", "R", "A"]),
    ("g", &["B", "I", "K", "R"]),
    ("h", &["C", "E", "L", "N"]),
    ("i", &["F", "H", "O", "Q"]),
];

fn cabello18() -> Result<OrthoHypergraph> {
    from_int_rays(&CABELLO18_RAYS, &CABELLO18_CONTEXTS)
}

// Two tripods sharing the leg A = e1.
fn tripods2() -> Result<OrthoHypergraph> {
    from_int_rays(
        &[("A", &[1, 0, 0]), ("B", &[0, 1, 0]), ("C", &[0, 0, 1]), ("D", &[0, 1, 1]), ("E", &[0, 1, -1])],
        &[("a", &["A", "B", "C"]), ("b", &["A", "D", "E"])],
    )
}

// Three fourpods in a cycle, linked pairwise by A, D and G. No coordinates.
fn fourpods3() -> Result<OrthoHypergraph> {
    OrthoHypergraph::from_combinatorial(
        "fourpods3",
        4,
        &["A", "B", "C", "D", "E", "F", "G", "H", "I"],
        &[
            ContextSpec::new("a", &["A", "B", "C", "D"]),
            ContextSpec::new("b", &["D", "E", "F", "G"]),
            ContextSpec::new("c", &["G", "H", "I", "A"]),
        ],
    )
}

// Two contexts in four dimensions linked by A = e1 and B = e2.
fn twolink4() -> Result<OrthoHypergraph> {
    from_int_rays(
        &[
            ("A", &[1, 0, 0, 0]),
            ("B", &[0, 1, 0, 0]),
            ("C", &[0, 0, 1, 0]),
            ("D", &[0, 0, 0, 1]),
            ("E", &[0, 0, 1, 1]),
            ("F", &[0, 0, 1, -1]),
        ],
        &[("a", &["A", "B", "C", "D"]), ("b", &["A", "B", "E", "F"])],
    )
}

/// Random combinatorial pasting of `num_contexts` blocks of size
/// `dimension` over at most `num_atoms` atoms. Every atom is used, no two
/// contexts coincide. Returns `None` when the parameters cannot be met.
pub fn random_pasting<R: Rng + ?Sized>(
    rng: &mut R,
    num_atoms: usize,
    dimension: usize,
    num_contexts: usize,
) -> Option<OrthoHypergraph> {
    if dimension < 2 || num_atoms < dimension || num_contexts == 0 {
        return None;
    }
    let mut sets: BTreeSet<Vec<usize>> = BTreeSet::new();
    let mut contexts: Vec<Vec<usize>> = Vec::new();
    let mut pool: Vec<usize> = (0..num_atoms).collect();
    pool.shuffle(rng);
    let mut fresh = pool.into_iter();
    for _ in 0..num_contexts * 20 {
        if contexts.len() == num_contexts {
            break;
        }
        // Seed each block with unused atoms first so every atom appears.
        let mut block: BTreeSet<usize> = BTreeSet::new();
        if !contexts.is_empty() {
            let prev = &contexts[rng.gen_range(0..contexts.len())];
            block.insert(prev[rng.gen_range(0..prev.len())]);
        }
        while block.len() < dimension {
            match fresh.next() {
                Some(a) => {
                    block.insert(a);
                }
                None => {
                    block.insert(rng.gen_range(0..num_atoms));
                }
            }
        }
        let block: Vec<usize> = block.into_iter().collect();
        if sets.insert(block.clone()) {
            contexts.push(block);
        }
    }
    let used: BTreeSet<usize> = contexts.iter().flatten().copied().collect();
    let relabel: HashMap<usize, usize> = used.iter().enumerate().map(|(i, &a)| (a, i)).collect();
    let labels: Vec<String> = (0..used.len()).map(|i| format!("x{i}")).collect();
    let label_refs: Vec<&str> = labels.iter().map(String::as_str).collect();
    let specs: Vec<ContextSpec> = contexts
        .iter()
        .enumerate()
        .map(|(i, c)| ContextSpec {
            label: Some(format!("k{i}")),
            atoms: c.iter().map(|a| labels[relabel[a]].clone()).collect(),
        })
        .collect();
    OrthoHypergraph::from_combinatorial("random", dimension, &label_refs, &specs).ok()
}

/// Parses a context list file: one context per line, optionally prefixed
/// by `label:`, members separated by commas or whitespace.
pub fn parse_context_specs(text: &str) -> Result<Vec<ContextSpec>> {
    let mut specs = Vec::new();
    for (idx, raw) in text.lines().enumerate() {
        let line = raw.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let (label, body) = match line.split_once(':') {
            Some((l, b)) => (Some(l.trim().to_string()), b),
            None => (None, line),
        };
        let atoms: Vec<String> = body
            .split(|c: char| c == ',' || c.is_whitespace())
            .map(str::trim)
            .filter(|s| !s.is_empty())
            .map(|s| s.trim_matches(|c| c == '{' || c == '}').to_string())
            .filter(|s| !s.is_empty())
            .collect();
        if atoms.is_empty() {
            return Err(Error::Parse { line: idx + 1, message: "context lists no atoms".into() });
        }
        specs.push(ContextSpec { label, atoms });
    }
    Ok(specs)
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn cabello18_shape() {
        let h = library_graph("cabello18").unwrap();
        assert_eq!(h.atoms().len(), 18);
        assert_eq!(h.contexts().len(), 9);
        assert!(h.incidence().iter().all(|i| i.len() == 2));
        assert!(h.has_coordinates());
    }

    #[test]
    fn single_triad_from_rays() {
        let rays = vec![
            Ray::from_ints("x", &[1, 0, 0]).unwrap(),
            Ray::from_ints("y", &[0, 1, 0]).unwrap(),
            Ray::from_ints("z", &[0, 0, 1]).unwrap(),
        ];
        let report = build_from_rays(&rays, None).unwrap();
        assert_eq!(report.graph.contexts().len(), 1);
        assert!(report.warnings.is_empty());
        let p = parity_diagnostic(&report.graph);
        assert_eq!(p.num_contexts, 1);
        assert_eq!(p.atom_multiplicities, vec![1, 1, 1]);
        assert!(!p.parity_obstruction);
    }

    #[test]
    fn duplicate_rays_merge_labels() {
        let rays = vec![
            Ray::from_ints("x", &[1, 0]).unwrap(),
            Ray::from_ints("y", &[0, 1]).unwrap(),
            Ray::from_ints("x2", &[-3, 0]).unwrap(),
        ];
        let g = build_from_rays(&rays, None).unwrap().graph;
        assert_eq!(g.atoms().len(), 2);
        assert_eq!(g.atoms()[0].labels, vec!["x", "x2"]);
        assert_eq!(g.atom_by_label("x2").unwrap().id, 0);
    }

    #[test]
    fn non_orthogonal_context_names_both_labels() {
        let rays = cabello18_rays();
        let specs = vec![ContextSpec::new("bad", &["A", "B", "C", "E"])];
        let err = build_from_rays(&rays, Some(&specs)).unwrap_err();
        assert_eq!(err, Error::NotOrthogonal { context: "bad".into(), first: "A".into(), second: "E".into() });
    }

    #[test]
    fn duplicate_context_rejected() {
        let rays = cabello18_rays();
        let specs = vec![ContextSpec::new("a", &["A", "B", "C", "D"]), ContextSpec::new("a2", &["D", "C", "B", "A"])];
        assert_eq!(build_from_rays(&rays, Some(&specs)).unwrap_err(), Error::DuplicateContext("a2".into()));
    }

    #[test]
    fn undersized_cliques_become_warnings() {
        // e1 ⟂ e2 in 3D with nothing completing the triad.
        let rays = vec![Ray::from_ints("x", &[1, 0, 0]).unwrap(), Ray::from_ints("y", &[0, 1, 0]).unwrap()];
        let r = build_from_rays(&rays, None).unwrap();
        assert!(r.graph.contexts().is_empty());
        assert!(r.warnings.iter().any(|w| w.contains("not a context")));
    }

    #[test]
    fn tripods_and_twolink_parity() {
        let t = library_graph("tripods2").unwrap();
        let p = parity_diagnostic(&t);
        assert_eq!(p.num_contexts, 2);
        assert_eq!(p.atom_multiplicities, vec![2, 1, 1, 1, 1]);
        assert!(!p.parity_obstruction);

        let w = library_graph("twolink4").unwrap();
        assert_eq!(w.atoms().len(), 6);
        assert_eq!(w.multiplicity(0), 2);
        assert_eq!(w.multiplicity(1), 2);
    }

    #[test]
    fn fourpods_has_no_coordinates() {
        let f = library_graph("fourpods3").unwrap();
        assert!(!f.has_coordinates());
        assert_eq!(f.atoms().len(), 9);
        assert_eq!(f.contexts().len(), 3);
    }

    #[test]
    fn document_roundtrip_is_bit_exact() {
        for g in standard_library() {
            let json = g.to_json();
            let back = OrthoHypergraph::from_json(&json).unwrap();
            assert_eq!(back, g);
            assert_eq!(back.to_json(), json);
        }
    }

    #[test]
    fn random_pastings_are_valid() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for _ in 0..50 {
            let g = random_pasting(&mut rng, 12, 3, 5).unwrap();
            assert!(g.atoms().len() <= 12);
            assert!(g.incidence().iter().all(|i| !i.is_empty()));
        }
    }

    #[test]
    fn context_file_parsing() {
        let specs = parse_context_specs("# ctx\na: A, B, C, D\nE F G H\n").unwrap();
        assert_eq!(specs[0].label.as_deref(), Some("a"));
        assert_eq!(specs[1].atoms, vec!["E", "F", "G", "H"]);
        assert!(parse_context_specs("x:\n").is_err());
    }

    #[test]
    fn cliques_of_triangle_plus_edge() {
        let mut adj = vec![vec![false; 4]; 4];
        for (a, b) in [(0, 1), (1, 2), (0, 2), (2, 3)] {
            adj[a][b] = true;
            adj[b][a] = true;
        }
        let mut c = maximal_cliques(&adj);
        c.iter_mut().for_each(|x| x.sort());
        c.sort();
        assert_eq!(c, vec![vec![0, 1, 2], vec![2, 3]]);
    }
}
