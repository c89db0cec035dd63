//! Independent oracles shared by the integration tests. Nothing here calls
//! into the code paths it is used to check.

#![allow(dead_code)]

use std::collections::{BTreeMap, BTreeSet, VecDeque};

use num_complex::Complex64;
use qprune::calibration::CalibrationSnapshot;
use qprune::device_graph::DeviceGraph;
use qprune::Pauli;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

// ---------------------------------------------------------------------------
// 4x4 matrix oracle for two-qubit Paulis and CNOT
// ---------------------------------------------------------------------------

pub type Mat = [[Complex64; 4]; 4];

fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

pub fn pauli_matrix(p: Pauli) -> [[Complex64; 2]; 2] {
    let (o, z, i) = (c(1.0, 0.0), c(0.0, 0.0), c(0.0, 1.0));
    match p {
        Pauli::I => [[o, z], [z, o]],
        Pauli::X => [[z, o], [o, z]],
        Pauli::Y => [[z, -i], [i, z]],
        Pauli::Z => [[o, z], [z, -o]],
    }
}

/// `a ⊗ b` with `a` on the first (most significant) qubit.
pub fn kron(a: Pauli, b: Pauli) -> Mat {
    let (ma, mb) = (pauli_matrix(a), pauli_matrix(b));
    let mut out = [[c(0.0, 0.0); 4]; 4];
    for r in 0..4 {
        for col in 0..4 {
            out[r][col] = ma[r / 2][col / 2] * mb[r % 2][col % 2];
        }
    }
    out
}

/// CNOT with the first qubit as control.
pub fn cnot_matrix() -> Mat {
    let mut m = [[c(0.0, 0.0); 4]; 4];
    for (r, col) in [(0, 0), (1, 1), (2, 3), (3, 2)] {
        m[r][col] = c(1.0, 0.0);
    }
    m
}

pub fn matmul(a: &Mat, b: &Mat) -> Mat {
    let mut out = [[c(0.0, 0.0); 4]; 4];
    for r in 0..4 {
        for col in 0..4 {
            out[r][col] = (0..4).map(|k| a[r][k] * b[k][col]).sum();
        }
    }
    out
}

pub fn dagger(a: &Mat) -> Mat {
    let mut out = [[c(0.0, 0.0); 4]; 4];
    for r in 0..4 {
        for col in 0..4 {
            out[r][col] = a[col][r].conj();
        }
    }
    out
}

/// Finds the Pauli pair equal to `m` up to a global phase.
pub fn identify_pair(m: &Mat) -> (Pauli, Pauli) {
    for a in Pauli::ALL {
        for b in Pauli::ALL {
            let p = kron(a, b);
            // m = λ p with |λ| = 1  <=>  tr(p† m)/4 has modulus 1.
            let overlap: Complex64 = (0..4)
                .flat_map(|r| (0..4).map(move |k| (r, k)))
                .map(|(r, k)| p[k][r].conj() * m[k][r])
                .sum::<Complex64>()
                / 4.0;
            if (overlap.norm() - 1.0).abs() < 1e-9 {
                return (a, b);
            }
        }
    }
    panic!("matrix is not a Pauli pair up to phase");
}

/// CNOT conjugation table from explicit matrices: `C (a ⊗ b) C†`.
pub fn cnot_conjugation_table() -> BTreeMap<(Pauli, Pauli), (Pauli, Pauli)> {
    let cx = cnot_matrix();
    let mut table = BTreeMap::new();
    for a in Pauli::ALL {
        for b in Pauli::ALL {
            let m = matmul(&matmul(&cx, &kron(a, b)), &dagger(&cx));
            table.insert((a, b), identify_pair(&m));
        }
    }
    table
}

/// Single-qubit Pauli product table up to phase, from 2x2 matrices.
pub fn product_table() -> BTreeMap<(Pauli, Pauli), Pauli> {
    let mut table = BTreeMap::new();
    for a in Pauli::ALL {
        for b in Pauli::ALL {
            let m = matmul(&kron(a, Pauli::I), &kron(b, Pauli::I));
            table.insert((a, b), identify_pair(&m).0);
        }
    }
    table
}

/// Exact process fidelity of a CNOT chain by enumerating every per-gate
/// Pauli assignment. Each gate is followed by the identity with probability
/// `1 - 5e/4` or by one of the 15 other pairs with equal probability.
pub fn enumerate_chain_fidelity(gate_errors: &[f64]) -> f64 {
    let conj = cnot_conjugation_table();
    let prod = product_table();
    let pairs: Vec<(Pauli, Pauli)> = Pauli::ALL
        .iter()
        .flat_map(|&a| Pauli::ALL.iter().map(move |&b| (a, b)))
        .collect();
    let gates = gate_errors.len();
    let keep: Vec<f64> = gate_errors
        .iter()
        .map(|e| (1.0 - 1.25 * e).clamp(0.0, 1.0))
        .collect();
    let mut total = 0.0;
    let assignments = 16usize.pow(gates as u32);
    for code in 0..assignments {
        let mut weight = 1.0;
        let mut letters = vec![Pauli::I; gates + 1];
        let mut rest = code;
        for k in 0..gates {
            let idx = rest % 16;
            rest /= 16;
            weight *= if idx == 0 {
                keep[k]
            } else {
                (1.0 - keep[k]) / 15.0
            };
            let (a, b) = conj[&(letters[k], letters[k + 1])];
            let (ea, eb) = pairs[idx];
            letters[k] = prod[&(ea, a)];
            letters[k + 1] = prod[&(eb, b)];
        }
        if letters.iter().all(|&p| p == Pauli::I) {
            total += weight;
        }
    }
    total
}

// ---------------------------------------------------------------------------
// Brute-force pruning oracle
// ---------------------------------------------------------------------------

/// Qubits and directed edges of one component.
pub type Component = (BTreeSet<usize>, BTreeSet<(usize, usize)>);

/// Largest partition by naive scans: `(qubits, directed edges)`, or `None`.
pub fn brute_force_largest(
    graph: &DeviceGraph<f64>,
    readout_max: f64,
    cnot_max: f64,
) -> Option<Component> {
    let n = graph.num_qubits;
    let good_qubit = |q: usize| -> bool {
        !graph.faulty.contains(&q) && matches!(graph.node_weight[q], Some(e) if e <= readout_max)
    };
    let directed: Vec<((usize, usize), Option<f64>)> =
        graph.edge_weight.iter().map(|(&k, &v)| (k, v)).collect();
    // An unordered pair is good if every directed edge between a and b is known and within the limit.
    let good_pair = |a: usize, b: usize| -> bool {
        let mut any = false;
        for &((c, t), w) in &directed {
            if (c == a && t == b) || (c == b && t == a) {
                any = true;
                match w {
                    Some(e) if e <= cnot_max => {}
                    _ => return false,
                }
            }
        }
        any
    };
    let kept: Vec<usize> = (0..n).filter(|&q| good_qubit(q)).collect();
    let mut comp_of = vec![usize::MAX; n];
    let mut comps: Vec<Vec<usize>> = Vec::new();
    for &s in &kept {
        if comp_of[s] != usize::MAX {
            continue;
        }
        let id = comps.len();
        let mut members = vec![s];
        comp_of[s] = id;
        let mut queue = VecDeque::from([s]);
        while let Some(q) = queue.pop_front() {
            for &r in &kept {
                if comp_of[r] == usize::MAX && good_pair(q, r) {
                    comp_of[r] = id;
                    members.push(r);
                    queue.push_back(r);
                }
            }
        }
        comps.push(members);
    }
    let with_edges: Vec<Component> = comps
        .into_iter()
        .map(|m| {
            let set: BTreeSet<usize> = m.into_iter().collect();
            let edges = directed
                .iter()
                .map(|&(e, _)| e)
                .filter(|&(c, t)| set.contains(&c) && set.contains(&t) && good_pair(c, t))
                .collect();
            (set, edges)
        })
        .collect();
    let mut best: Option<Component> = None;
    for cand in with_edges {
        let better = match &best {
            None => true,
            Some(b) => {
                let key = |x: &Component| {
                    (
                        x.0.len(),
                        x.1.len(),
                        usize::MAX - *x.0.iter().next().unwrap(),
                    )
                };
                key(&cand) > key(b)
            }
        };
        if better {
            best = Some(cand);
        }
    }
    best
}

/// Random device on up to `max_nodes` qubits with random weights, some
/// unknown entries, one-directional couplings and faulty qubits.
pub fn random_device(rng: &mut ChaCha8Rng, max_nodes: usize) -> DeviceGraph<f64> {
    let n = rng.random_range(1..=max_nodes);
    let mut snap = CalibrationSnapshot::new("random", 0, n);
    for q in 0..n {
        if rng.random_bool(0.95) {
            snap.readout_error.insert(q, rng.random_range(0.0..0.1));
        }
        if rng.random_bool(0.1) {
            snap.faulty_qubits.insert(q);
        }
    }
    let density = rng.random_range(0.15..0.6);
    let mut edges = Vec::new();
    for a in 0..n {
        for b in a + 1..n {
            if rng.random_bool(density) {
                match rng.random_range(0..3) {
                    0 => edges.push((a, b)),
                    1 => edges.push((b, a)),
                    _ => {
                        edges.push((a, b));
                        edges.push((b, a));
                    }
                }
            }
        }
    }
    let coupling = qprune::CouplingMap::new(n, edges.iter().copied()).unwrap();
    for &(c, t) in &edges {
        if rng.random_bool(0.95) {
            snap.cnot_error.insert((c, t), rng.random_range(0.0..0.05));
        }
    }
    qprune::device_graph::build_weighted_graph(&coupling, &snap)
        .unwrap()
        .0
}

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}
