//! Two-valued measures: exactly one true atom per context, one value per
//! atom across all of its contexts.

use rand::seq::SliceRandom;
use rand::Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::orthospace::{parity_diagnostic, OrthoHypergraph, ParityReport};

pub const DEFAULT_LIMIT: usize = 10_000_000;

/// Below this many atoms the contextual search is exhaustive.
pub const EXHAUSTIVE_ATOM_LIMIT: usize = 24;

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct TwoValuedMeasure {
    pub assignment: Vec<bool>,
}

impl TwoValuedMeasure {
    /// `0`/`1` characters in atom-id order.
    pub fn to_bits(&self) -> String {
        self.assignment.iter().map(|&b| if b { '1' } else { '0' }).collect()
    }

    pub fn true_atoms(&self) -> impl Iterator<Item = usize> + '_ {
        self.assignment.iter().enumerate().filter_map(|(i, &b)| b.then_some(i))
    }

    /// Rule 1 on every context of `h`.
    pub fn satisfies(&self, h: &OrthoHypergraph) -> bool {
        self.assignment.len() == h.atoms().len()
            && h.contexts().iter().all(|c| c.atoms.iter().filter(|&&a| self.assignment[a]).count() == 1)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct StateSetReport {
    pub count: usize,
    /// Sorted lexicographically by assignment.
    pub measures: Vec<TwoValuedMeasure>,
    pub separating: bool,
    pub unital: bool,
    pub truncated: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct EnumerateOptions {
    pub limit: usize,
    pub parallel: bool,
}

impl Default for EnumerateOptions {
    fn default() -> Self {
        Self { limit: DEFAULT_LIMIT, parallel: false }
    }
}

/// Backtracking over a set-partition constraint system: variables are
/// 0/1, each block needs exactly one 1.
#[derive(Debug, Clone)]
pub(crate) struct ExactOneSearch {
    num_vars: usize,
    blocks: Vec<Vec<usize>>,
    membership: Vec<Vec<usize>>,
    order: Vec<usize>,
}

struct SearchState {
    value: Vec<i8>,
    ones: Vec<u32>,
    open: Vec<u32>,
}

/// Receives search events; returning `false` from `solution` stops the run.
trait Visitor {
    fn node(&mut self, _var: usize, _value: bool, _ok: bool) {}
    fn solution(&mut self, value: &[i8]) -> bool;
}

impl ExactOneSearch {
    pub(crate) fn new(num_vars: usize, blocks: Vec<Vec<usize>>) -> Self {
        let mut membership = vec![Vec::new(); num_vars];
        for (b, block) in blocks.iter().enumerate() {
            for &v in block {
                membership[v].push(b);
            }
        }
        let order = constrained_order(num_vars, &blocks, &membership);
        Self { num_vars, blocks, membership, order }
    }

    pub(crate) fn from_graph(h: &OrthoHypergraph) -> Self {
        Self::new(h.atoms().len(), h.context_lists())
    }

    fn fresh_state(&self) -> SearchState {
        SearchState {
            value: vec![-1; self.num_vars],
            ones: vec![0; self.blocks.len()],
            open: self.blocks.iter().map(|b| b.len() as u32).collect(),
        }
    }

    /// Assigns and reports whether every touched block is still satisfiable.
    fn assign(&self, st: &mut SearchState, var: usize, value: bool) -> bool {
        st.value[var] = value as i8;
        let mut ok = true;
        for &b in &self.membership[var] {
            st.open[b] -= 1;
            if value {
                st.ones[b] += 1;
            }
            if st.ones[b] > 1 || (st.open[b] == 0 && st.ones[b] == 0) {
                ok = false;
            }
        }
        ok
    }

    fn unassign(&self, st: &mut SearchState, var: usize) {
        let value = st.value[var] == 1;
        st.value[var] = -1;
        for &b in &self.membership[var] {
            st.open[b] += 1;
            if value {
                st.ones[b] -= 1;
            }
        }
    }

    /// Value order at each level: `false` first unless `flip` says otherwise.
    fn descend<V: Visitor>(
        &self,
        st: &mut SearchState,
        depth: usize,
        visitor: &mut V,
        flip: &mut dyn FnMut() -> bool,
    ) -> bool {
        if depth == self.order.len() {
            return visitor.solution(&st.value);
        }
        let var = self.order[depth];
        let first = flip();
        for value in [first, !first] {
            let ok = self.assign(st, var, value);
            visitor.node(var, value, ok);
            let keep_going = !ok || self.descend(st, depth + 1, visitor, flip);
            self.unassign(st, var);
            if !keep_going {
                return false;
            }
        }
        true
    }

    fn run<V: Visitor>(&self, visitor: &mut V) {
        let mut st = self.fresh_state();
        self.descend(&mut st, 0, visitor, &mut || false);
    }

    /// First solution found with value order chosen by `rng`.
    pub(crate) fn random_solution<R: Rng + ?Sized>(&self, rng: &mut R) -> Option<Vec<bool>> {
        let mut sink = FirstSolution(None);
        let mut st = self.fresh_state();
        self.descend(&mut st, 0, &mut sink, &mut || rng.gen());
        sink.0
    }

    pub(crate) fn first_solution(&self) -> Option<Vec<bool>> {
        let mut sink = FirstSolution(None);
        self.run(&mut sink);
        sink.0
    }

    /// All solutions in DFS order, at most `limit`. Subtrees below a short
    /// prefix are explored on the rayon pool when `parallel` is set; the
    /// concatenation order is the sequential DFS order either way.
    fn collect(&self, limit: usize, parallel: bool) -> (Vec<Vec<bool>>, bool) {
        if !parallel || self.order.len() < 8 {
            let mut sink = Collect::new(limit);
            self.run(&mut sink);
            return (sink.found, sink.truncated);
        }
        let depth = 6.min(self.order.len());
        let mut prefixes = Vec::new();
        self.prefixes(&mut self.fresh_state(), 0, depth, &mut Vec::new(), &mut prefixes);
        let parts: Vec<(Vec<Vec<bool>>, bool)> = prefixes
            .par_iter()
            .map(|prefix| {
                let mut st = self.fresh_state();
                for (k, &value) in prefix.iter().enumerate() {
                    self.assign(&mut st, self.order[k], value);
                }
                let mut sink = Collect::new(limit);
                self.descend(&mut st, depth, &mut sink, &mut || false);
                (sink.found, sink.truncated)
            })
            .collect();
        let mut found = Vec::new();
        let mut truncated = false;
        for (part, cut) in parts {
            for s in part {
                if found.len() == limit {
                    truncated = true;
                    break;
                }
                found.push(s);
            }
            if truncated {
                break;
            }
            truncated |= cut;
            if truncated {
                break;
            }
        }
        (found, truncated)
    }

    fn prefixes(
        &self,
        st: &mut SearchState,
        depth: usize,
        target: usize,
        current: &mut Vec<bool>,
        out: &mut Vec<Vec<bool>>,
    ) {
        if depth == target {
            out.push(current.clone());
            return;
        }
        let var = self.order[depth];
        for value in [false, true] {
            if self.assign(st, var, value) {
                current.push(value);
                self.prefixes(st, depth + 1, target, current, out);
                current.pop();
            }
            self.unassign(st, var);
        }
    }

    /// Exhausts the tree, hashing every visited node. Returns the number of
    /// solutions (capped at 1) and the transcript digest.
    fn transcript(&self) -> (usize, u64, String) {
        let mut t = Transcript { hasher: Sha256::new(), nodes: 0, solutions: 0 };
        self.run(&mut t);
        (t.solutions, t.nodes, hex::encode(t.hasher.finalize()))
    }
}

/// Most constrained first: prefer variables sharing blocks with those
/// already placed, then higher multiplicity, then lower id.
fn constrained_order(num_vars: usize, blocks: &[Vec<usize>], membership: &[Vec<usize>]) -> Vec<usize> {
    let mut placed = vec![false; num_vars];
    let mut touched = vec![false; blocks.len()];
    let mut order = Vec::with_capacity(num_vars);
    for _ in 0..num_vars {
        let next = (0..num_vars)
            .filter(|&v| !placed[v])
            .max_by_key(|&v| {
                let linked = membership[v].iter().filter(|&&b| touched[b]).count();
                (linked, membership[v].len(), std::cmp::Reverse(v))
            })
            .expect("unplaced variable remains");
        placed[next] = true;
        membership[next].iter().for_each(|&b| touched[b] = true);
        order.push(next);
    }
    order
}

struct FirstSolution(Option<Vec<bool>>);

impl Visitor for FirstSolution {
    fn solution(&mut self, value: &[i8]) -> bool {
        self.0 = Some(value.iter().map(|&v| v == 1).collect());
        false
    }
}

struct Collect {
    limit: usize,
    found: Vec<Vec<bool>>,
    truncated: bool,
}

impl Collect {
    fn new(limit: usize) -> Self {
        Self { limit, found: Vec::new(), truncated: false }
    }
}

impl Visitor for Collect {
    fn solution(&mut self, value: &[i8]) -> bool {
        if self.found.len() == self.limit {
            self.truncated = true;
            return false;
        }
        self.found.push(value.iter().map(|&v| v == 1).collect());
        true
    }
}

struct Transcript {
    hasher: Sha256,
    nodes: u64,
    solutions: usize,
}

impl Visitor for Transcript {
    fn node(&mut self, var: usize, value: bool, ok: bool) {
        self.nodes += 1;
        self.hasher.update((var as u64).to_le_bytes());
        self.hasher.update([value as u8, ok as u8]);
    }

    fn solution(&mut self, _value: &[i8]) -> bool {
        self.solutions += 1;
        false
    }
}

pub fn enumerate_measures(h: &OrthoHypergraph, limit: Option<usize>) -> StateSetReport {
    enumerate_measures_with(h, EnumerateOptions { limit: limit.unwrap_or(DEFAULT_LIMIT), ..Default::default() })
}

pub fn enumerate_measures_with(h: &OrthoHypergraph, options: EnumerateOptions) -> StateSetReport {
    let search = ExactOneSearch::from_graph(h);
    let (found, truncated) = search.collect(options.limit, options.parallel);
    let mut measures: Vec<TwoValuedMeasure> =
        found.into_iter().map(|assignment| TwoValuedMeasure { assignment }).collect();
    measures.sort();
    let n = h.atoms().len();
    let unital = (0..n).all(|a| measures.iter().any(|m| m.assignment[a]));
    let separating = (0..n).all(|a| (a + 1..n).all(|b| measures.iter().any(|m| m.assignment[a] != m.assignment[b])));
    StateSetReport { count: measures.len(), measures, separating, unital, truncated }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum KsWitness {
    /// Odd context count against even atom multiplicities.
    Parity(ParityReport),
    /// Exhaustive search found nothing; digest of the visited nodes.
    Exhausted { nodes: u64, transcript_sha256: String },
    /// A noncontextual measure, proving the structure is not a KS set.
    Measure { assignment: String },
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct KsVerdict {
    pub ks: bool,
    pub witness: KsWitness,
}

/// True iff no two-valued measure exists.
pub fn is_ks_set(h: &OrthoHypergraph) -> KsVerdict {
    let search = ExactOneSearch::from_graph(h);
    if let Some(assignment) = search.first_solution() {
        return KsVerdict {
            ks: false,
            witness: KsWitness::Measure { assignment: TwoValuedMeasure { assignment }.to_bits() },
        };
    }
    let parity = parity_diagnostic(h);
    if parity.parity_obstruction {
        return KsVerdict { ks: true, witness: KsWitness::Parity(parity) };
    }
    let (solutions, nodes, digest) = search.transcript();
    debug_assert_eq!(solutions, 0);
    KsVerdict { ks: true, witness: KsWitness::Exhausted { nodes, transcript_sha256: digest } }
}

/// Truth values per (atom, context) pair. Rule 1 holds in every context;
/// Rule 2 may fail at the listed atoms.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ContextualAssignment {
    /// `values[c][k]` is the value of the k-th atom of context `c`.
    pub values: Vec<Vec<bool>>,
    pub violating_atoms: Vec<usize>,
    /// Whether the violation count is proven minimal.
    pub exhaustive: bool,
}

impl ContextualAssignment {
    pub fn violations(&self) -> usize {
        self.violating_atoms.len()
    }

    /// Value of `atom` in context `context`, if it belongs there.
    pub fn value(&self, h: &OrthoHypergraph, atom: usize, context: usize) -> Option<bool> {
        let pos = h.contexts()[context].atoms.iter().position(|&a| a == atom)?;
        Some(self.values[context][pos])
    }
}

/// Atoms in `split` get an independent variable per context; all others
/// share one variable across their contexts.
fn split_search(h: &OrthoHypergraph, split: &[usize]) -> (ExactOneSearch, Vec<Vec<usize>>) {
    let mut next = h.atoms().len();
    let mut var_of: Vec<Vec<usize>> = Vec::with_capacity(h.contexts().len());
    for ctx in h.contexts() {
        var_of.push(
            ctx.atoms
                .iter()
                .map(|&a| {
                    if split.contains(&a) {
                        next += 1;
                        next - 1
                    } else {
                        a
                    }
                })
                .collect(),
        );
    }
    (ExactOneSearch::new(next, var_of.clone()), var_of)
}

fn materialize(
    h: &OrthoHypergraph,
    var_of: &[Vec<usize>],
    solution: &[bool],
    exhaustive: bool,
) -> ContextualAssignment {
    let values: Vec<Vec<bool>> = var_of.iter().map(|vars| vars.iter().map(|&v| solution[v]).collect()).collect();
    let mut first_seen: Vec<Option<bool>> = vec![None; h.atoms().len()];
    let mut violating = vec![false; h.atoms().len()];
    for (ctx, vals) in h.contexts().iter().zip(&values) {
        for (&a, &v) in ctx.atoms.iter().zip(vals) {
            match first_seen[a] {
                None => first_seen[a] = Some(v),
                Some(prev) if prev != v => violating[a] = true,
                _ => {}
            }
        }
    }
    ContextualAssignment {
        values,
        violating_atoms: (0..h.atoms().len()).filter(|&a| violating[a]).collect(),
        exhaustive,
    }
}

fn link_atoms(h: &OrthoHypergraph) -> Vec<usize> {
    let mut links: Vec<usize> = (0..h.atoms().len()).filter(|&a| h.multiplicity(a) >= 2).collect();
    links.sort_by_key(|&a| (std::cmp::Reverse(h.multiplicity(a)), a));
    links
}

/// Calls `f` on every k-subset of `items` in lexicographic position order
/// until it returns `Some`.
fn first_subset<T>(items: &[usize], k: usize, f: &mut dyn FnMut(&[usize]) -> Option<T>) -> Option<T> {
    fn go<T>(
        items: &[usize],
        k: usize,
        start: usize,
        current: &mut Vec<usize>,
        f: &mut dyn FnMut(&[usize]) -> Option<T>,
    ) -> Option<T> {
        if current.len() == k {
            return f(current);
        }
        for i in start..items.len() {
            if items.len() - i < k - current.len() {
                break;
            }
            current.push(items[i]);
            if let Some(found) = go(items, k, i + 1, current, f) {
                return Some(found);
            }
            current.pop();
        }
        None
    }
    go(items, k, 0, &mut Vec::new(), f)
}

/// Rule-1 assignment on (atom, context) pairs with as few noncontextual
/// atoms as the search can manage. Minimal below
/// [`EXHAUSTIVE_ATOM_LIMIT`] atoms; greedy with local repair above.
/// Returns `None` only if some context admits no Rule-1 assignment at all,
/// which cannot happen for nonempty contexts.
pub fn contextual_assignment_search(h: &OrthoHypergraph) -> Option<ContextualAssignment> {
    let links = link_atoms(h);
    if h.atoms().len() < EXHAUSTIVE_ATOM_LIMIT {
        for k in 0..=links.len() {
            let found = first_subset(&links, k, &mut |split| {
                let (search, var_of) = split_search(h, split);
                search.first_solution().map(|sol| materialize(h, &var_of, &sol, true))
            });
            if found.is_some() {
                return found;
            }
        }
        return None;
    }

    let mut split: Vec<usize> = Vec::new();
    let mut remaining = links.into_iter();
    let solution = loop {
        let (search, var_of) = split_search(h, &split);
        if let Some(sol) = search.first_solution() {
            break (sol, var_of);
        }
        split.push(remaining.next()?);
    };
    let (mut sol, mut var_of) = solution;
    let mut i = 0;
    while i < split.len() {
        let mut trial = split.clone();
        trial.remove(i);
        let (search, trial_vars) = split_search(h, &trial);
        if let Some(s) = search.first_solution() {
            split = trial;
            sol = s;
            var_of = trial_vars;
        } else {
            i += 1;
        }
    }
    Some(materialize(h, &var_of, &sol, false))
}

/// Like [`contextual_assignment_search`], but candidate split sets and
/// value orders are drawn from `rng`, so repeated calls spread the
/// violations over different atoms. The violation count is still the
/// smallest one tried in increasing order.
pub fn random_contextual_assignment<R: Rng + ?Sized>(h: &OrthoHypergraph, rng: &mut R) -> Option<ContextualAssignment> {
    let mut links = link_atoms(h);
    links.shuffle(rng);
    for k in 0..=links.len() {
        let found = first_subset(&links, k, &mut |split| {
            let (search, var_of) = split_search(h, split);
            search.random_solution(rng).map(|sol| materialize(h, &var_of, &sol, false))
        });
        if found.is_some() {
            return found;
        }
    }
    None
}

pub fn parity_witness(h: &OrthoHypergraph) -> Option<ParityReport> {
    let p = parity_diagnostic(h);
    p.parity_obstruction.then_some(p)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::orthospace::{library_graph, ContextSpec, OrthoHypergraph};

    fn single_context(d: usize) -> OrthoHypergraph {
        let labels: Vec<String> = (0..d).map(|i| format!("a{i}")).collect();
        let refs: Vec<&str> = labels.iter().map(String::as_str).collect();
        OrthoHypergraph::from_combinatorial("one", d, &refs, &[ContextSpec::new("c", &refs)]).unwrap()
    }

    #[test]
    fn single_context_has_d_measures() {
        for d in 2..6 {
            let r = enumerate_measures(&single_context(d), None);
            assert_eq!(r.count, d);
            assert!(r.unital && r.separating);
        }
    }

    #[test]
    fn tripods_have_five_measures() {
        let r = enumerate_measures(&library_graph("tripods2").unwrap(), None);
        assert_eq!(r.count, 5);
        let bits: Vec<String> = r.measures.iter().map(|m| m.to_bits()).collect();
        assert_eq!(bits, ["00101", "00110", "01001", "01010", "10000"]);
    }

    #[test]
    fn cabello_has_none() {
        let h = library_graph("cabello18").unwrap();
        let r = enumerate_measures(&h, None);
        assert_eq!(r.count, 0);
        assert!(!r.unital);
        let v = is_ks_set(&h);
        assert!(v.ks);
        assert!(matches!(v.witness, KsWitness::Parity(_)));
    }

    #[test]
    fn twolink_is_not_ks() {
        let v = is_ks_set(&library_graph("twolink4").unwrap());
        assert!(!v.ks);
        assert!(matches!(v.witness, KsWitness::Measure { .. }));
    }

    #[test]
    fn limit_truncates() {
        let r = enumerate_measures(&single_context(5), Some(3));
        assert_eq!(r.count, 3);
        assert!(r.truncated);
    }

    #[test]
    fn parallel_matches_sequential() {
        let h = crate::orthospace::library_graph("fourpods3").unwrap();
        let seq = enumerate_measures_with(&h, EnumerateOptions { limit: 1000, parallel: false });
        let par = enumerate_measures_with(&h, EnumerateOptions { limit: 1000, parallel: true });
        assert_eq!(seq, par);
        let seq = enumerate_measures_with(&h, EnumerateOptions { limit: 7, parallel: false });
        let par = enumerate_measures_with(&h, EnumerateOptions { limit: 7, parallel: true });
        assert_eq!(seq, par);
    }

    #[test]
    fn contextual_search_examples() {
        let c = contextual_assignment_search(&library_graph("cabello18").unwrap()).unwrap();
        assert!(c.violations() >= 1);
        assert!(c.exhaustive);
        let c = contextual_assignment_search(&single_context(3)).unwrap();
        assert_eq!(c.violations(), 0);
        let c = contextual_assignment_search(&library_graph("tripods2").unwrap()).unwrap();
        assert_eq!(c.violations(), 0);
    }

    #[test]
    fn exhausted_witness_without_parity() {
        // Odd cycle of 2-contexts plus a pendant context: unsatisfiable,
        // yet p lies in three contexts so the parity test does not apply.
        let h = OrthoHypergraph::from_combinatorial(
            "triangle+",
            2,
            &["p", "q", "r", "s"],
            &[
                ContextSpec::new("a", &["p", "q"]),
                ContextSpec::new("b", &["q", "r"]),
                ContextSpec::new("c", &["r", "p"]),
                ContextSpec::new("d", &["p", "s"]),
            ],
        )
        .unwrap();
        let v = is_ks_set(&h);
        assert!(v.ks);
        match v.witness {
            KsWitness::Exhausted { nodes, transcript_sha256 } => {
                assert!(nodes > 0);
                assert_eq!(transcript_sha256.len(), 64);
                assert_eq!(is_ks_set(&h).witness, KsWitness::Exhausted { nodes, transcript_sha256 });
            }
            other => panic!("unexpected witness {other:?}"),
        }
    }
}
