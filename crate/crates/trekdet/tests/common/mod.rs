//! Shared fixtures for the integration and acceptance suites: seeded random
//! graph corpora and the vertex-set pairs to test them on.

use rand::prelude::IndexedRandom;
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use trekdet::MixedGraph;

/// Every subset pair (A, B) with |A| = |B| <= max_k, both in ascending
/// vertex order. Includes the empty pair.
pub fn set_pairs(vertices: &[u32], max_k: usize) -> Vec<(Vec<u32>, Vec<u32>)> {
    let mut subsets_by_size: Vec<Vec<Vec<u32>>> = vec![Vec::new(); max_k + 1];
    let n = vertices.len();
    for mask in 0u32..(1 << n) {
        let size = mask.count_ones() as usize;
        if size > max_k {
            continue;
        }
        let subset: Vec<u32> =
            (0..n).filter(|&i| mask & (1 << i) != 0).map(|i| vertices[i]).collect();
        subsets_by_size[size].push(subset);
    }
    let mut pairs = Vec::new();
    for per_size in &subsets_by_size {
        for a in per_size {
            for b in per_size {
                pairs.push((a.clone(), b.clone()));
            }
        }
    }
    pairs
}

fn random_bidirected(rng: &mut ChaCha8Rng, n: u32, prob: f64) -> Vec<(u32, u32)> {
    let mut bedges = Vec::new();
    for i in 1..=n {
        for j in (i + 1)..=n {
            if rng.random_bool(prob) {
                bedges.push((i, j));
            }
        }
    }
    bedges
}

/// Seeded corpus of mixed graphs with acyclic directed parts, sizes cycling
/// through 2..=max_vertices. Directed edges only go from smaller to larger
/// vertex ids, so the directed part is a DAG by construction. Roughly half
/// the graphs carry bidirected edges.
pub fn acyclic_corpus(seed: u64, count: usize, max_vertices: u32) -> Vec<MixedGraph> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut corpus = Vec::with_capacity(count);
    for k in 0..count {
        let n = 2 + (k as u32) % (max_vertices - 1);
        let mut dedges = Vec::new();
        for i in 1..=n {
            for j in (i + 1)..=n {
                if rng.random_bool(0.4) {
                    dedges.push((i, j));
                }
            }
        }
        let bedges = random_bidirected(&mut rng, n, 0.15);
        let g = MixedGraph::build((1..=n).collect(), dedges, bedges)
            .expect("corpus graphs are well-formed");
        assert!(g.is_acyclic());
        corpus.push(g);
    }
    corpus
}

/// Seeded corpus of mixed graphs whose directed part contains at least one
/// directed cycle, sizes cycling through 2..=max_vertices.
pub fn cyclic_corpus(seed: u64, count: usize, max_vertices: u32) -> Vec<MixedGraph> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut corpus = Vec::with_capacity(count);
    while corpus.len() < count {
        let n = 2 + (corpus.len() as u32) % (max_vertices - 1);
        let mut dedges = Vec::new();
        for i in 1..=n {
            for j in 1..=n {
                if i != j && rng.random_bool(0.3) {
                    dedges.push((i, j));
                }
            }
        }
        // Close a directed cycle through two random distinct vertices if
        // the sample came out acyclic.
        let vertices: Vec<u32> = (1..=n).collect();
        let candidate = MixedGraph::build(vertices.clone(), dedges.clone(), vec![])
            .expect("corpus graphs are well-formed");
        if candidate.is_acyclic() {
            let mut picked: Vec<u32> = vertices.choose_multiple(&mut rng, 2).copied().collect();
            picked.sort_unstable();
            let (x, y) = (picked[0], picked[1]);
            if !dedges.contains(&(x, y)) {
                dedges.push((x, y));
            }
            if !dedges.contains(&(y, x)) {
                dedges.push((y, x));
            }
        }
        let bedges = random_bidirected(&mut rng, n, 0.1);
        let g = MixedGraph::build(vertices, dedges, bedges)
            .expect("corpus graphs are well-formed");
        if g.is_acyclic() {
            continue;
        }
        corpus.push(g);
    }
    corpus
}
