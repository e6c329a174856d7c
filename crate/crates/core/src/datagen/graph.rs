//! Configuration-model random graphs and their use as observations.

use std::io::Write;

use rand::seq::SliceRandom;
use rand::Rng;

use super::scenario::{Family, ScenarioConfig, ScenarioId};
use crate::dataset::{LabeledDataset, Observation};
use crate::error::{Error, Result};
use crate::metric::Metric;
use crate::rng::stream;

pub const NETWORK_VERTICES: usize = 40;

/// Adjacency matrix (row-major, `v x v`) with the degree sequence it was
/// drawn for. Simple graphs hold 0/1 entries and a zero diagonal; the raw
/// multigraph stores edge multiplicities off the diagonal and the number of
/// self-loops on it (a loop adds 2 to its vertex degree).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GraphSample {
    v: usize,
    adjacency: Vec<u32>,
    degree_target: Vec<usize>,
}

impl GraphSample {
    pub fn from_adjacency(
        v: usize,
        adjacency: Vec<u32>,
        degree_target: Vec<usize>,
    ) -> Result<Self> {
        if adjacency.len() != v * v {
            return Err(Error::invalid("adjacency must be v x v"));
        }
        for i in 0..v {
            for j in 0..v {
                if adjacency[i * v + j] != adjacency[j * v + i] {
                    return Err(Error::invalid(format!(
                        "adjacency not symmetric at ({i},{j})"
                    )));
                }
            }
        }
        Ok(GraphSample {
            v,
            adjacency,
            degree_target,
        })
    }

    pub fn vertices(&self) -> usize {
        self.v
    }

    pub fn entry(&self, i: usize, j: usize) -> u32 {
        self.adjacency[i * self.v + j]
    }

    pub fn adjacency(&self) -> &[u32] {
        &self.adjacency
    }

    pub fn degree_target(&self) -> &[usize] {
        &self.degree_target
    }

    /// Vertex degrees; a self-loop counts twice.
    pub fn realized_degrees(&self) -> Vec<usize> {
        self.adjacency
            .chunks(self.v)
            .enumerate()
            .map(|(i, r)| r.iter().map(|&c| c as usize).sum::<usize>() + r[i] as usize)
            .collect()
    }

    pub fn is_simple(&self) -> bool {
        (0..self.v).all(|i| self.entry(i, i) == 0) && self.adjacency.iter().all(|&c| c <= 1)
    }

    pub fn edge_count(&self) -> usize {
        let off: usize = (0..self.v)
            .flat_map(|i| ((i + 1)..self.v).map(move |j| (i, j)))
            .map(|(i, j)| self.entry(i, j) as usize)
            .sum();
        let loops: usize = (0..self.v).map(|i| self.entry(i, i) as usize).sum();
        off + loops
    }

    /// Row-major flattening of the full adjacency matrix.
    pub fn vectorize(&self) -> Vec<f64> {
        self.adjacency.iter().map(|&c| f64::from(c)).collect()
    }

    /// One `u v` line per edge (1-indexed, `u <= v`), repeated for
    /// multi-edges.
    pub fn write_edge_list<W: Write>(&self, mut out: W) -> std::io::Result<()> {
        for i in 0..self.v {
            for _ in 0..self.entry(i, i) {
                writeln!(out, "{} {}", i + 1, i + 1)?;
            }
            for j in (i + 1)..self.v {
                for _ in 0..self.entry(i, j) {
                    writeln!(out, "{} {}", i + 1, j + 1)?;
                }
            }
        }
        Ok(())
    }
}

impl Observation for GraphSample {
    fn dim(&self) -> usize {
        self.v * self.v
    }
}

/// Row-major flattening of the adjacency matrix.
pub fn vectorize_adjacency(g: &GraphSample) -> Vec<f64> {
    g.vectorize()
}

/// Frobenius distance between adjacency matrices, optionally squared.
/// Equals the (squared) Euclidean distance of the vectorized adjacencies.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct FrobeniusGraph {
    pub squared: bool,
}

impl Metric<GraphSample> for FrobeniusGraph {
    fn distance(&self, a: &GraphSample, b: &GraphSample) -> f64 {
        let sq: u64 = a
            .adjacency
            .iter()
            .zip(&b.adjacency)
            .map(|(&x, &y)| {
                let d = u64::from(x.abs_diff(y));
                d * d
            })
            .sum();
        let sq = sq as f64;
        if self.squared {
            sq
        } else {
            sq.sqrt()
        }
    }
}

/// Pairs degree stubs uniformly at random. With `simple`, self-loops are
/// dropped and multi-edges collapsed.
pub fn configuration_model_with<R: Rng + ?Sized>(
    degrees: &[usize],
    rng: &mut R,
    simple: bool,
) -> Result<GraphSample> {
    let total: usize = degrees.iter().sum();
    if !total.is_multiple_of(2) {
        return Err(Error::InvalidDegreeSequence(format!(
            "degree sum {total} is odd"
        )));
    }
    let v = degrees.len();
    let mut stubs: Vec<usize> = degrees
        .iter()
        .enumerate()
        .flat_map(|(i, &k)| std::iter::repeat_n(i, k))
        .collect();
    stubs.shuffle(rng);
    let mut adjacency = vec![0u32; v * v];
    for pair in stubs.chunks_exact(2) {
        let (i, j) = (pair[0], pair[1]);
        if i == j {
            if !simple {
                adjacency[i * v + i] += 1;
            }
        } else if simple {
            adjacency[i * v + j] = 1;
            adjacency[j * v + i] = 1;
        } else {
            adjacency[i * v + j] += 1;
            adjacency[j * v + i] += 1;
        }
    }
    Ok(GraphSample {
        v,
        adjacency,
        degree_target: degrees.to_vec(),
    })
}

pub fn configuration_model(degrees: &[usize], seed: u64, simple: bool) -> Result<GraphSample> {
    configuration_model_with(degrees, &mut stream(seed, &[]), simple)
}

/// Degree vectors of the two classes.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DegreeSequences {
    pub x: Vec<usize>,
    pub y: Vec<usize>,
}

pub(crate) fn check_network_a(scenario: ScenarioId, a: f64) -> Result<usize> {
    let max = match scenario {
        ScenarioId::S8 => 20,
        ScenarioId::S9 => 40,
        other => {
            return Err(Error::InvalidConfig(format!(
                "{other} is not a network scenario"
            )));
        }
    };
    if a.fract() != 0.0 || a < 0.0 || a > max as f64 {
        return Err(Error::InvalidConfig(format!(
            "{scenario} needs an integer a in 0..={max}, got {a}"
        )));
    }
    Ok(a as usize)
}

/// Degree vectors on 40 vertices.
///
/// S8: class X has twenty 1s then twenty 3s; class Y has `20 - a` 1s, `a`
/// 2s, `a` 4s, `20 - a` 3s. S9: class X is all 20s; class Y has `40 - a` 20s
/// then `a` 30s.
pub fn degree_sequence(scenario: ScenarioId, a: usize) -> Result<DegreeSequences> {
    check_network_a(scenario, a as f64)?;
    let rep = |v: usize, n: usize| std::iter::repeat_n(v, n);
    Ok(match scenario {
        ScenarioId::S8 => DegreeSequences {
            x: rep(1, 20).chain(rep(3, 20)).collect(),
            y: rep(1, 20 - a)
                .chain(rep(2, a))
                .chain(rep(4, a))
                .chain(rep(3, 20 - a))
                .collect(),
        },
        ScenarioId::S9 => DegreeSequences {
            x: rep(20, 40).collect(),
            y: rep(20, 40 - a).chain(rep(30, a)).collect(),
        },
        _ => unreachable!("checked above"),
    })
}

/// Training and test graphs for S8/S9: configuration-model multigraphs, or
/// erased simple graphs when `cfg.simple_graphs` is set.
pub fn gen_network(
    cfg: &ScenarioConfig,
    trial: usize,
) -> Result<(LabeledDataset<GraphSample>, LabeledDataset<GraphSample>)> {
    cfg.validate()?;
    if cfg.scenario.family() != Family::Network {
        return Err(Error::InvalidConfig(format!(
            "{} is not a network scenario",
            cfg.scenario
        )));
    }
    if trial >= cfg.trials {
        return Err(Error::InvalidConfig(format!(
            "trial {trial} >= {}",
            cfg.trials
        )));
    }
    let seqs = degree_sequence(cfg.scenario, check_network_a(cfg.scenario, cfg.a)?)?;
    let seed = cfg.trial_seed(trial);
    let draw = |tag: u64, n: usize, m: usize| -> Result<LabeledDataset<GraphSample>> {
        let mut rng = stream(seed, &[tag]);
        let mut obs = Vec::with_capacity(n + m);
        for _ in 0..n {
            obs.push(configuration_model_with(
                &seqs.x,
                &mut rng,
                cfg.simple_graphs,
            )?);
        }
        for _ in 0..m {
            obs.push(configuration_model_with(
                &seqs.y,
                &mut rng,
                cfg.simple_graphs,
            )?);
        }
        let labels = std::iter::repeat_n(1, n)
            .chain(std::iter::repeat_n(2, m))
            .collect();
        LabeledDataset::new(obs, labels)
    };
    Ok((
        draw(1, cfg.n_train, cfg.m_train)?,
        draw(2, cfg.n_test, cfg.m_test)?,
    ))
}
