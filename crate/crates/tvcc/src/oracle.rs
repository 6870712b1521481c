//! Brute-force catastrophicity verdict from the state-transition graph.
//!
//! The encoder circuit is realized explicitly, every state is enumerated,
//! and the graph is searched for a cycle whose edges emit all-zero output
//! while consuming at least one set input bit. Such a cycle is exactly an
//! infinite-weight input with finite-weight output, so finding one is a
//! mechanical certificate that the encoder is catastrophic. The self-loop
//! at the all-zero state never qualifies: its input weight is zero.
//!
//! The search is exponential in the register count by construction; it
//! exists to cross-check the divisor test and to certify conversions, and
//! it refuses instances past a hard state-bit guard.

use std::collections::VecDeque;
use std::fmt;

use thiserror::Error;

use crate::encoder::{BitStream, EncoderError, PeriodicEncoder, RationalPeriodicEncoder};
use crate::gf2poly::Poly;

/// Hard ceiling on total register bits; past this the graph does not get
/// built at all.
pub const MAX_STATE_BITS: usize = 20;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum OracleError {
    #[error("realization needs {bits} state bits, over the limit of {MAX_STATE_BITS}")]
    TooLarge { bits: usize },
}

/// Fully enumerated state-transition graph of an encoder realization.
///
/// Nodes are (phase, state) pairs: the phase is the epoch index mod p, the
/// state is the register contents packed into an integer. Exactly one edge
/// leaves each (phase, state) per input tuple, so the edge count is
/// `p · 2^state_bits · 2^k`.
///
/// Registers are laid out per input row in controller canonical form:
/// row `i` gets `max(deg den, max deg of its numerator entries)` bits, with
/// feedback taps from the shared denominator. A feedforward encoder
/// (denominator 1) degenerates to plain shift registers holding the last
/// inputs of each row.
pub struct StateGraph {
    phases: usize,
    k: usize,
    n: usize,
    state_bits: usize,
    next: Vec<u32>,
    out: Vec<u32>,
}

impl fmt::Debug for StateGraph {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("StateGraph")
            .field("phases", &self.phases)
            .field("k", &self.k)
            .field("n", &self.n)
            .field("state_bits", &self.state_bits)
            .field("edges", &self.next.len())
            .finish()
    }
}

impl StateGraph {
    pub fn phases(&self) -> usize {
        self.phases
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn state_bits(&self) -> usize {
        self.state_bits
    }

    pub fn num_states(&self) -> usize {
        1 << self.state_bits
    }

    pub fn edge_count(&self) -> usize {
        self.next.len()
    }

    fn index(&self, phase: usize, state: u32, input: u32) -> usize {
        ((phase * self.num_states() + state as usize) << self.k) | input as usize
    }

    /// The (next state, output bits) edge for one transition.
    pub fn edge(&self, phase: usize, state: u32, input: u32) -> (u32, u32) {
        let i = self.index(phase, state, input);
        (self.next[i], self.out[i])
    }

    /// Walk the graph from the all-zero state at phase 0, reproducing the
    /// encoder map epoch by epoch.
    pub fn simulate(&self, input: &BitStream) -> Result<BitStream, EncoderError> {
        if input.width() != self.k {
            return Err(EncoderError::WidthMismatch {
                expected: self.k,
                got: input.width(),
            });
        }
        let mut out = BitStream::new(self.n);
        let mut state = 0u32;
        let mut tuple = vec![0u8; self.n];
        for t in 0..input.len() {
            let mut u = 0u32;
            for (i, &b) in input.tuple(t).iter().enumerate() {
                u |= (b as u32) << i;
            }
            let (next, bits) = self.edge(t % self.phases, state, u);
            for (j, slot) in tuple.iter_mut().enumerate() {
                *slot = ((bits >> j) & 1) as u8;
            }
            out.push_tuple(&tuple).expect("width fixed");
            state = next;
        }
        Ok(out)
    }
}

/// Realize a feedforward periodic encoder as a state graph.
pub fn realize_periodic(e: &PeriodicEncoder) -> Result<StateGraph, OracleError> {
    realize(e, &Poly::one())
}

/// Realize a rational periodic encoder (shared denominator) as a state
/// graph with feedback taps.
pub fn realize_rational(e: &RationalPeriodicEncoder) -> Result<StateGraph, OracleError> {
    realize(e.base(), e.den())
}

fn realize(base: &PeriodicEncoder, den: &Poly) -> Result<StateGraph, OracleError> {
    let (p, k, n) = (base.period(), base.k(), base.n());
    let den_deg = den.degree().finite().expect("causal denominator");

    // per-row register counts and bit offsets into the packed state
    let row_bits: Vec<usize> = (0..k)
        .map(|i| {
            let num_deg = base
                .constituents()
                .iter()
                .flat_map(|c| (0..n).map(move |j| c.matrix().get(i, j).degree()))
                .filter_map(|d| d.finite())
                .max()
                .unwrap_or(0);
            num_deg.max(den_deg)
        })
        .collect();
    let offsets: Vec<usize> = row_bits
        .iter()
        .scan(0, |acc, &b| {
            let o = *acc;
            *acc += b;
            Some(o)
        })
        .collect();
    let state_bits: usize = row_bits.iter().sum();
    if state_bits > MAX_STATE_BITS {
        return Err(OracleError::TooLarge { bits: state_bits });
    }

    // feedback taps: bit d-1 set when den has a D^d term
    let den_taps: Vec<u32> = (0..k)
        .map(|i| {
            (1..=row_bits[i].min(den_deg))
                .filter(|&d| den.coeff(d))
                .fold(0u32, |m, d| m | 1 << (d - 1))
        })
        .collect();
    // numerator taps per (phase, row, column): constant tap plus a mask of
    // register taps, bit d-1 for the D^d coefficient
    let mut num0 = vec![0u8; p * k * n];
    let mut num_taps = vec![0u32; p * k * n];
    for (phase, c) in base.constituents().iter().enumerate() {
        for (i, &bits) in row_bits.iter().enumerate() {
            for j in 0..n {
                let gen = c.matrix().get(i, j);
                let at = (phase * k + i) * n + j;
                num0[at] = gen.constant_term() as u8;
                num_taps[at] = (1..=bits)
                    .filter(|&d| gen.coeff(d))
                    .fold(0u32, |m, d| m | 1 << (d - 1));
            }
        }
    }

    let num_states = 1usize << state_bits;
    let num_inputs = 1usize << k;
    let mut next = vec![0u32; p * num_states * num_inputs];
    let mut out = vec![0u32; p * num_states * num_inputs];
    for phase in 0..p {
        for state in 0..num_states as u32 {
            for input in 0..num_inputs as u32 {
                let mut next_state = 0u32;
                let mut out_bits = 0u32;
                for i in 0..k {
                    let regs = (state >> offsets[i]) & low_mask(row_bits[i]);
                    // s = current input plus denominator feedback
                    let s = ((input >> i) & 1) ^ parity(regs & den_taps[i]);
                    for j in 0..n {
                        let at = (phase * k + i) * n + j;
                        let bit = (num0[at] as u32 & s) ^ parity(regs & num_taps[at]);
                        out_bits ^= bit << j;
                    }
                    if row_bits[i] > 0 {
                        let shifted = ((regs << 1) | s) & low_mask(row_bits[i]);
                        next_state |= shifted << offsets[i];
                    }
                }
                let idx = ((phase * num_states + state as usize) << k) | input as usize;
                next[idx] = next_state;
                out[idx] = out_bits;
            }
        }
    }

    Ok(StateGraph {
        phases: p,
        k,
        n,
        state_bits,
        next,
        out,
    })
}

fn low_mask(bits: usize) -> u32 {
    if bits == 0 {
        0
    } else {
        u32::MAX >> (32 - bits)
    }
}

fn parity(v: u32) -> u32 {
    v.count_ones() & 1
}

/// One edge of a witness cycle.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct WitnessStep {
    pub phase: usize,
    pub state: u32,
    pub input: u32,
    pub next_state: u32,
    pub output: u32,
}

/// A cycle in the state graph with all-zero output and positive input
/// weight: a replayable certificate of catastrophic behavior.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct WitnessCycle {
    state_bits: usize,
    k: usize,
    n: usize,
    steps: Vec<WitnessStep>,
}

impl WitnessCycle {
    pub fn steps(&self) -> &[WitnessStep] {
        &self.steps
    }

    pub fn len(&self) -> usize {
        self.steps.len()
    }

    pub fn is_empty(&self) -> bool {
        self.steps.is_empty()
    }

    pub fn input_weight(&self) -> u32 {
        self.steps.iter().map(|s| s.input.count_ones()).sum()
    }

    pub fn output_weight(&self) -> u32 {
        self.steps.iter().map(|s| s.output.count_ones()).sum()
    }

    /// Replay the cycle against a graph: every step must be a real edge,
    /// consecutive steps must chain (phases advancing mod p), the last step
    /// must close on the first, and the weights must certify catastrophe.
    pub fn validate(&self, g: &StateGraph) -> bool {
        if self.steps.is_empty() {
            return false;
        }
        for (i, step) in self.steps.iter().enumerate() {
            let (next, out) = g.edge(step.phase, step.state, step.input);
            if next != step.next_state || out != step.output {
                return false;
            }
            let after = &self.steps[(i + 1) % self.steps.len()];
            if after.phase != (step.phase + 1) % g.phases() || after.state != step.next_state {
                return false;
            }
        }
        self.output_weight() == 0 && self.input_weight() > 0
    }
}

fn bits_le(v: u32, width: usize) -> String {
    if width == 0 {
        return "-".to_string();
    }
    (0..width)
        .map(|i| if (v >> i) & 1 == 1 { '1' } else { '0' })
        .collect()
}

impl fmt::Display for WitnessCycle {
    /// One line per edge: `phase state input -> next / output`, all bit
    /// fields little-endian (register 0 first); `-` for a zero-width state.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, s) in self.steps.iter().enumerate() {
            if i > 0 {
                writeln!(f)?;
            }
            write!(
                f,
                "{} {} {} -> {} / {}",
                s.phase,
                bits_le(s.state, self.state_bits),
                bits_le(s.input, self.k),
                bits_le(s.next_state, self.state_bits),
                bits_le(s.output, self.n),
            )?;
        }
        Ok(())
    }
}

/// Verdict of the state-graph search.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum OracleVerdict {
    Catastrophic(WitnessCycle),
    NonCatastrophic,
}

impl OracleVerdict {
    pub fn is_catastrophic(&self) -> bool {
        matches!(self, OracleVerdict::Catastrophic(_))
    }
}

/// Search the graph for a zero-output, positive-input-weight cycle that is
/// reachable from the all-zero state.
///
/// Only zero-output edges can participate in such a cycle, so the search
/// restricts to that subgraph, takes its strongly connected components, and
/// looks for a positive-input edge with both endpoints in one component
/// (self-loops included). Reachability from the start state is enforced
/// first so that unreachable corners of a non-minimal realization cannot
/// produce a false verdict.
pub fn oracle_check(g: &StateGraph) -> OracleVerdict {
    let num_states = g.num_states();
    let node_count = g.phases() * num_states;
    let num_inputs = 1u32 << g.k();

    // reachability from (phase 0, all-zero state) over all edges
    let mut reachable = vec![false; node_count];
    let mut queue = VecDeque::new();
    reachable[0] = true;
    queue.push_back(0usize);
    while let Some(node) = queue.pop_front() {
        let phase = node / num_states;
        let state = (node % num_states) as u32;
        let next_phase = (phase + 1) % g.phases();
        for input in 0..num_inputs {
            let (next, _) = g.edge(phase, state, input);
            let to = next_phase * num_states + next as usize;
            if !reachable[to] {
                reachable[to] = true;
                queue.push_back(to);
            }
        }
    }

    // the zero-output subgraph on reachable nodes
    let mut adj: Vec<Vec<(usize, u32)>> = vec![Vec::new(); node_count];
    for node in 0..node_count {
        if !reachable[node] {
            continue;
        }
        let phase = node / num_states;
        let state = (node % num_states) as u32;
        let next_phase = (phase + 1) % g.phases();
        for input in 0..num_inputs {
            let (next, out) = g.edge(phase, state, input);
            if out != 0 {
                continue;
            }
            let to = next_phase * num_states + next as usize;
            if reachable[to] {
                adj[node].push((to, input));
            }
        }
    }

    let comp = tarjan_scc(&adj, &reachable);

    // a positive-input zero-output edge inside one component closes a cycle
    for node in 0..node_count {
        for &(to, input) in &adj[node] {
            if input == 0 || comp[node] != comp[to] {
                continue;
            }
            return OracleVerdict::Catastrophic(extract_witness(g, &adj, &comp, node, to, input));
        }
    }
    OracleVerdict::NonCatastrophic
}

/// Iterative Tarjan strongly-connected components over the subgraph.
/// Returns a component id per node (unvisited nodes keep usize::MAX).
fn tarjan_scc(adj: &[Vec<(usize, u32)>], active: &[bool]) -> Vec<usize> {
    let n = adj.len();
    let mut comp = vec![usize::MAX; n];
    let mut index = vec![usize::MAX; n];
    let mut lowlink = vec![usize::MAX; n];
    let mut on_stack = vec![false; n];
    let mut stack: Vec<usize> = Vec::new();
    let mut counter = 0usize;
    let mut comp_count = 0usize;
    // explicit DFS frames: (node, next edge position)
    let mut frames: Vec<(usize, usize)> = Vec::new();

    for start in 0..n {
        if !active[start] || index[start] != usize::MAX {
            continue;
        }
        index[start] = counter;
        lowlink[start] = counter;
        counter += 1;
        stack.push(start);
        on_stack[start] = true;
        frames.push((start, 0));

        while !frames.is_empty() {
            let (node, pos) = {
                let frame = frames.last_mut().expect("nonempty");
                let at = *frame;
                if at.1 < adj[at.0].len() {
                    frame.1 += 1;
                }
                at
            };
            if pos < adj[node].len() {
                let (to, _) = adj[node][pos];
                if index[to] == usize::MAX {
                    index[to] = counter;
                    lowlink[to] = counter;
                    counter += 1;
                    stack.push(to);
                    on_stack[to] = true;
                    frames.push((to, 0));
                } else if on_stack[to] {
                    lowlink[node] = lowlink[node].min(index[to]);
                }
            } else {
                frames.pop();
                if lowlink[node] == index[node] {
                    loop {
                        let w = stack.pop().expect("scc stack nonempty");
                        on_stack[w] = false;
                        comp[w] = comp_count;
                        if w == node {
                            break;
                        }
                    }
                    comp_count += 1;
                }
                if let Some(&(parent, _)) = frames.last() {
                    lowlink[parent] = lowlink[parent].min(lowlink[node]);
                }
            }
        }
    }
    comp
}

/// Build the witness: the chosen positive-input edge `a -> b`, then a path
/// `b -> ... -> a` through zero-output edges inside the same component.
fn extract_witness(
    g: &StateGraph,
    adj: &[Vec<(usize, u32)>],
    comp: &[usize],
    a: usize,
    b: usize,
    input: u32,
) -> WitnessCycle {
    let num_states = g.num_states();
    let step_of = |node: usize, input: u32| {
        let phase = node / num_states;
        let state = (node % num_states) as u32;
        let (next_state, output) = g.edge(phase, state, input);
        WitnessStep {
            phase,
            state,
            input,
            next_state,
            output,
        }
    };

    let mut steps = vec![step_of(a, input)];
    if a != b {
        // BFS from b to a staying inside the component
        let mut parent: Vec<Option<(usize, u32)>> = vec![None; adj.len()];
        let mut seen = vec![false; adj.len()];
        let mut queue = VecDeque::new();
        seen[b] = true;
        queue.push_back(b);
        'search: while let Some(node) = queue.pop_front() {
            for &(to, step_input) in &adj[node] {
                if comp[to] != comp[a] || seen[to] {
                    continue;
                }
                seen[to] = true;
                parent[to] = Some((node, step_input));
                if to == a {
                    break 'search;
                }
                queue.push_back(to);
            }
        }
        // walk parents back from a to b, collecting edges in order
        let mut rev = Vec::new();
        let mut at = a;
        while at != b {
            let (from, step_input) = parent[at].expect("same component, so the path exists");
            rev.push((from, step_input));
            at = from;
        }
        steps.extend(rev.into_iter().rev().map(|(node, i)| step_of(node, i)));
    }
    WitnessCycle {
        state_bits: g.state_bits(),
        k: g.k(),
        n: g.n(),
        steps,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::encoder::TimeInvariantEncoder;
    use crate::polymatrix::PolyMatrix;

    fn tie(rows: &[&[&str]]) -> TimeInvariantEncoder {
        let g = PolyMatrix::from_rows(
            rows.iter()
                .map(|r| r.iter().map(|s| s.parse().unwrap()).collect())
                .collect(),
        )
        .unwrap();
        TimeInvariantEncoder::new(g).unwrap()
    }

    fn classic() -> PeriodicEncoder {
        PeriodicEncoder::from_time_invariant(tie(&[&["11", "101"]]))
    }

    #[test]
    fn classic_graph_shape() {
        let g = realize_periodic(&classic()).unwrap();
        assert_eq!(g.state_bits(), 2);
        assert_eq!(g.num_states(), 4);
        assert_eq!(g.edge_count(), 8);
    }

    #[test]
    fn classic_is_caught_with_the_known_self_loop() {
        let g = realize_periodic(&classic()).unwrap();
        match oracle_check(&g) {
            OracleVerdict::Catastrophic(w) => {
                assert!(w.validate(&g));
                // the all-ones state absorbs the all-ones input silently
                assert_eq!(
                    w.steps(),
                    &[WitnessStep {
                        phase: 0,
                        state: 0b11,
                        input: 1,
                        next_state: 0b11,
                        output: 0,
                    }]
                );
                assert_eq!(w.to_string(), "0 11 1 -> 11 / 00");
            }
            OracleVerdict::NonCatastrophic => panic!("expected catastrophic"),
        }
    }

    #[test]
    fn clean_encoder_has_no_silent_cycle() {
        let e = PeriodicEncoder::from_time_invariant(tie(&[&["1", "11"]]));
        let g = realize_periodic(&e).unwrap();
        assert_eq!(g.edge_count(), 4);
        assert_eq!(oracle_check(&g), OracleVerdict::NonCatastrophic);
    }

    #[test]
    fn phase_doubling_keeps_the_verdict() {
        let e = PeriodicEncoder::new(vec![classic().constituent(0).clone(); 2]).unwrap();
        let g = realize_periodic(&e).unwrap();
        assert_eq!(g.phases() * g.num_states(), 8);
        assert_eq!(g.edge_count(), 16);
        match oracle_check(&g) {
            OracleVerdict::Catastrophic(w) => {
                assert!(w.validate(&g));
                assert_eq!(w.len(), 2); // the self-loop stretches over both phases
            }
            OracleVerdict::NonCatastrophic => panic!("expected catastrophic"),
        }
    }

    #[test]
    fn zero_state_zero_input_loop_is_excluded() {
        // all-zero encoder: every edge is silent, and the zero-state
        // zero-input self-loop alone must not trigger; the positive-input
        // edges there do
        let e = PeriodicEncoder::from_time_invariant(tie(&[&["1", "1"]]));
        let g = realize_periodic(&e).unwrap();
        // output = input on both lanes: silent edges all have input 0
        assert_eq!(oracle_check(&g), OracleVerdict::NonCatastrophic);
    }

    #[test]
    fn rational_realization_matches_series_division() {
        // numerators [1, 1+D^2] over 1+D
        let base = PeriodicEncoder::from_time_invariant(tie(&[&["1", "101"]]));
        let r = RationalPeriodicEncoder::new(base, "11".parse().unwrap()).unwrap();
        let g = realize_rational(&r).unwrap();
        assert_eq!(g.state_bits(), 2); // max(deg den = 1, deg num = 2)

        let u = BitStream::from_bits(
            1,
            &[1, 0, 0, 1, 1, 0, 1, 0, 1, 1, 0, 0, 0, 1, 0, 1, 1, 1, 0, 0],
        )
        .unwrap();
        assert_eq!(g.simulate(&u).unwrap(), r.encode(&u, u.len()).unwrap());
    }

    #[test]
    fn simulation_matches_serial_encoding() {
        let e = PeriodicEncoder::new(vec![tie(&[&["11", "101"]]), tie(&[&["1", "11"]])]).unwrap();
        let g = realize_periodic(&e).unwrap();
        let u = BitStream::from_bits(1, &[1, 1, 0, 1, 0, 0, 1, 0, 1, 1]).unwrap();
        assert_eq!(g.simulate(&u).unwrap(), e.encode_serial(&u).unwrap());
    }

    #[test]
    fn state_guard_trips() {
        // degree-21 generator: 21 register bits for one row
        let mut coeffs = vec![0u8; 22];
        coeffs[0] = 1;
        coeffs[21] = 1;
        let gen = crate::gf2poly::Poly::from_coeffs(&coeffs);
        let g = PolyMatrix::from_rows(vec![vec![gen, "1".parse().unwrap()]]).unwrap();
        let e = PeriodicEncoder::from_time_invariant(TimeInvariantEncoder::new(g).unwrap());
        assert_eq!(
            realize_periodic(&e).unwrap_err(),
            OracleError::TooLarge { bits: 21 }
        );
    }

    /// Naive alternative route: for every silent positive-input edge, check
    /// plain DFS reachability back to its tail through silent edges.
    fn naive_check(g: &StateGraph) -> bool {
        let num_states = g.num_states();
        let node_count = g.phases() * num_states;
        let num_inputs = 1u32 << g.k();

        let mut reachable = vec![false; node_count];
        let mut stack = vec![0usize];
        reachable[0] = true;
        while let Some(node) = stack.pop() {
            let phase = node / num_states;
            let state = (node % num_states) as u32;
            for input in 0..num_inputs {
                let (next, _) = g.edge(phase, state, input);
                let to = ((phase + 1) % g.phases()) * num_states + next as usize;
                if !reachable[to] {
                    reachable[to] = true;
                    stack.push(to);
                }
            }
        }

        let silent_next = |node: usize| {
            let phase = node / num_states;
            let state = (node % num_states) as u32;
            (0..num_inputs).filter_map(move |input| {
                let (next, out) = g.edge(phase, state, input);
                (out == 0).then_some((
                    ((phase + 1) % g.phases()) * num_states + next as usize,
                    input,
                ))
            })
        };

        for a in 0..node_count {
            if !reachable[a] {
                continue;
            }
            for (b, input) in silent_next(a) {
                if input == 0 || !reachable[b] {
                    continue;
                }
                // DFS from b back to a over silent edges
                let mut seen = vec![false; node_count];
                let mut stack = vec![b];
                seen[b] = true;
                while let Some(node) = stack.pop() {
                    if node == a {
                        return true;
                    }
                    for (to, _) in silent_next(node) {
                        if reachable[to] && !seen[to] {
                            seen[to] = true;
                            stack.push(to);
                        }
                    }
                }
            }
        }
        false
    }

    #[test]
    fn scc_route_agrees_with_plain_dfs() {
        // every rate-1/2 memory-<=2 tap pair, single phase
        let polys: Vec<String> = (0u32..8)
            .map(|bits| format!("{}{}{}", bits & 1, (bits >> 1) & 1, (bits >> 2) & 1))
            .collect();
        let mut checked = 0;
        for a in &polys {
            for b in &polys {
                let e = PeriodicEncoder::from_time_invariant(tie(&[&[a, b]]));
                let g = realize_periodic(&e).unwrap();
                assert_eq!(
                    oracle_check(&g).is_catastrophic(),
                    naive_check(&g),
                    "taps {a} {b}"
                );
                checked += 1;
            }
        }
        assert_eq!(checked, 64);

        // a sample of two-phase combinations
        for a in 0..8usize {
            for b in 0..8usize {
                let first = tie(&[&[&polys[a], &polys[(a + 3) % 8]]]);
                let second = tie(&[&[&polys[b], &polys[(b + 5) % 8]]]);
                let e = PeriodicEncoder::new(vec![first, second]).unwrap();
                let g = realize_periodic(&e).unwrap();
                assert_eq!(
                    oracle_check(&g).is_catastrophic(),
                    naive_check(&g),
                    "pair {a} {b}"
                );
            }
        }
    }
}
