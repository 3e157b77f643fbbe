//! Deterministic synthetic circuits for experiments and randomized checks.
//!
//! Uses a small self-contained SplitMix64 generator so that a given seed
//! produces the same circuits on every platform and in every run.

use crate::netlist::{Edge, Endpoint, Gate, Netlist};

/// SplitMix64 pseudo-random generator. Fast, tiny state, stable output.
#[derive(Clone, Debug)]
pub struct SplitMix64 {
    state: u64,
}

impl SplitMix64 {
    pub fn new(seed: u64) -> Self {
        Self { state: seed }
    }

    pub fn next_u64(&mut self) -> u64 {
        self.state = self.state.wrapping_add(0x9e37_79b9_7f4a_7c15);
        let mut z = self.state;
        z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
        z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
        z ^ (z >> 31)
    }

    /// Uniform in `0..bound`; `bound` must be nonzero.
    pub fn next_below(&mut self, bound: usize) -> usize {
        (self.next_u64() % bound as u64) as usize
    }

    pub fn next_bool(&mut self) -> bool {
        self.next_u64() & 1 == 1
    }
}

fn random_truth_table(rng: &mut SplitMix64, m: usize, n: usize) -> Vec<Vec<bool>> {
    (0..1usize << m)
        .map(|_| (0..n).map(|_| rng.next_bool()).collect())
        .collect()
}

/// A random connected directed tree on 1..=`max_gates` gates with random
/// truth tables. Tree edges get random directions; each gate may pick up a
/// couple of extra external inputs and at most one extra external output.
/// Total edge count stays at or below `edge_budget` so the exhaustive oracle
/// remains cheap.
pub fn random_tree(rng: &mut SplitMix64, max_gates: usize, edge_budget: usize) -> Netlist {
    assert!(max_gates >= 1);
    loop {
        let n = 1 + rng.next_below(max_gates);
        // tree shape: each vertex beyond the first attaches to an earlier one
        let mut incoming: Vec<Vec<usize>> = vec![Vec::new(); n]; // child tree edges per gate (by edge number)
        let mut outgoing: Vec<Vec<usize>> = vec![Vec::new(); n];
        let mut tree_edges = Vec::new(); // (source gate, sink gate)
        for v in 1..n {
            let u = rng.next_below(v);
            let (src, dst) = if rng.next_bool() { (u, v) } else { (v, u) };
            let t = tree_edges.len();
            tree_edges.push((src, dst));
            outgoing[src].push(t);
            incoming[dst].push(t);
        }
        // arities: tree degree plus some external pins, capped small
        let mut num_in = Vec::with_capacity(n);
        let mut num_out = Vec::with_capacity(n);
        for v in 0..n {
            let extra_in = rng.next_below(3).min(3usize.saturating_sub(incoming[v].len()));
            let extra_out = rng.next_below(2);
            num_in.push(incoming[v].len() + extra_in);
            num_out.push(outgoing[v].len() + extra_out);
        }
        let total_edges: usize =
            tree_edges.len() + (0..n).map(|v| num_in[v] - incoming[v].len() + num_out[v] - outgoing[v].len()).sum::<usize>();
        if total_edges > edge_budget {
            continue;
        }

        let gates: Vec<Gate> = (0..n)
            .map(|v| Gate::table(format!("g{v}"), num_in[v], num_out[v], random_truth_table(rng, num_in[v], num_out[v])))
            .collect();

        // pin assignment: tree edges take the low pins, externals fill the rest
        let mut edges = Vec::new();
        let mut in_pin_of = vec![(0usize, 0usize); tree_edges.len()];
        let mut out_pin_of = vec![(0usize, 0usize); tree_edges.len()];
        for v in 0..n {
            for (pin, &t) in incoming[v].iter().enumerate() {
                in_pin_of[t] = (v, pin);
            }
            for (pin, &t) in outgoing[v].iter().enumerate() {
                out_pin_of[t] = (v, pin);
            }
        }
        for (t, _) in tree_edges.iter().enumerate() {
            edges.push(Edge {
                id: format!("t{t}"),
                source: Endpoint::Pin { gate: out_pin_of[t].0, pin: out_pin_of[t].1 },
                sink: Endpoint::Pin { gate: in_pin_of[t].0, pin: in_pin_of[t].1 },
            });
        }
        let mut ext = 0;
        for v in 0..n {
            for pin in incoming[v].len()..num_in[v] {
                edges.push(Edge {
                    id: format!("i{ext}"),
                    source: Endpoint::External,
                    sink: Endpoint::Pin { gate: v, pin },
                });
                ext += 1;
            }
        }
        let mut ext = 0;
        for v in 0..n {
            for pin in outgoing[v].len()..num_out[v] {
                edges.push(Edge {
                    id: format!("o{ext}"),
                    source: Endpoint::Pin { gate: v, pin },
                    sink: Endpoint::External,
                });
                ext += 1;
            }
        }

        let nl = Netlist { gates, edges };
        debug_assert!(nl.validate().is_empty());
        return nl;
    }
}

/// A random netlist that may contain feedback: gates with small random
/// arities, a random subset of output pins wired to input pins (self-loops
/// included), everything else external. Edge count stays at or below
/// `edge_budget`.
pub fn random_netlist(rng: &mut SplitMix64, max_gates: usize, edge_budget: usize) -> Netlist {
    assert!(max_gates >= 1);
    loop {
        let n = 1 + rng.next_below(max_gates);
        let num_in: Vec<usize> = (0..n).map(|_| rng.next_below(3)).collect();
        let num_out: Vec<usize> = (0..n).map(|_| 1 + rng.next_below(2)).collect();

        let mut in_pins: Vec<(usize, usize)> =
            (0..n).flat_map(|v| (0..num_in[v]).map(move |p| (v, p))).collect();
        let mut out_pins: Vec<(usize, usize)> =
            (0..n).flat_map(|v| (0..num_out[v]).map(move |p| (v, p))).collect();
        // Fisher-Yates
        for i in (1..in_pins.len()).rev() {
            in_pins.swap(i, rng.next_below(i + 1));
        }
        for i in (1..out_pins.len()).rev() {
            out_pins.swap(i, rng.next_below(i + 1));
        }
        let max_wires = in_pins.len().min(out_pins.len());
        let wires = if max_wires == 0 { 0 } else { rng.next_below(max_wires + 1) };

        let total_edges = in_pins.len() + out_pins.len() - wires;
        if total_edges > edge_budget {
            continue;
        }

        let gates: Vec<Gate> = (0..n)
            .map(|v| Gate::table(format!("g{v}"), num_in[v], num_out[v], random_truth_table(rng, num_in[v], num_out[v])))
            .collect();
        let mut edges = Vec::new();
        for w in 0..wires {
            edges.push(Edge {
                id: format!("w{w}"),
                source: Endpoint::Pin { gate: out_pins[w].0, pin: out_pins[w].1 },
                sink: Endpoint::Pin { gate: in_pins[w].0, pin: in_pins[w].1 },
            });
        }
        for (k, &(v, p)) in in_pins[wires..].iter().enumerate() {
            edges.push(Edge {
                id: format!("i{k}"),
                source: Endpoint::External,
                sink: Endpoint::Pin { gate: v, pin: p },
            });
        }
        for (k, &(v, p)) in out_pins[wires..].iter().enumerate() {
            edges.push(Edge {
                id: format!("o{k}"),
                source: Endpoint::Pin { gate: v, pin: p },
                sink: Endpoint::External,
            });
        }

        let nl = Netlist { gates, edges };
        debug_assert!(nl.validate().is_empty());
        return nl;
    }
}
