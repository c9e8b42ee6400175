//! JSON input formats read by the command-line tool.

use std::collections::BTreeMap;
use std::path::Path;

use multideg::{Error, FlowNetwork, Multigraph, Result};
use serde::{Deserialize, Serialize};

pub fn read_json<T: for<'de> Deserialize<'de>>(path: &Path) -> Result<T> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| Error::InvalidInput(format!("cannot read {}: {e}", path.display())))?;
    serde_json::from_str(&text).map_err(|e| Error::Parse(format!("{}: {e}", path.display())))
}

/// `{"n": …, "mult": [[…]]}`, a full symmetric matrix.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct GraphFile {
    pub n: usize,
    pub mult: Vec<Vec<u32>>,
}

impl GraphFile {
    pub fn into_graph(self) -> Result<Multigraph> {
        if self.mult.len() != self.n {
            return Err(Error::InvalidInput(format!(
                "n = {} but the matrix has {} rows",
                self.n,
                self.mult.len()
            )));
        }
        Multigraph::from_matrix(self.mult)
    }

    pub fn from_graph(g: &Multigraph) -> Self {
        GraphFile {
            n: g.n(),
            mult: g.matrix().to_vec(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct VertexSpec {
    pub id: String,
    pub n: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct EdgeSpec {
    pub from: String,
    pub to: String,
    pub colour: u32,
    pub alpha: f64,
    pub s: f64,
}

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct LambdaSpec {
    #[serde(default)]
    pub default: Option<f64>,
    /// `vertex id -> colour -> λ`.
    #[serde(default)]
    pub values: BTreeMap<String, BTreeMap<u32, f64>>,
}

/// A flow network with its `Y` and `Z` sets, vertices named by id.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct NetworkFile {
    pub vertices: Vec<VertexSpec>,
    pub edges: Vec<EdgeSpec>,
    #[serde(default)]
    pub lambda: LambdaSpec,
    #[serde(rename = "Y")]
    pub y: Vec<String>,
    #[serde(rename = "Z")]
    pub z: Vec<String>,
}

impl NetworkFile {
    pub fn build(&self) -> Result<(FlowNetwork, Vec<usize>, Vec<usize>)> {
        let mut net = FlowNetwork::with_ids(
            self.vertices.iter().map(|v| v.id.clone()).collect(),
            self.vertices.iter().map(|v| v.n).collect(),
        );
        let idx = |id: &str| -> Result<usize> {
            net_index(&self.vertices, id).ok_or_else(|| Error::InvalidInput(format!("unknown vertex {id:?}")))
        };
        for e in &self.edges {
            net.add_edge(idx(&e.from)?, idx(&e.to)?, e.colour, e.alpha, e.s)?;
        }
        if let Some(d) = self.lambda.default {
            net.set_default_lambda(d);
        }
        for (v, per) in &self.lambda.values {
            let i = idx(v)?;
            for (&c, &l) in per {
                net.set_lambda(i, c, l);
            }
        }
        let y = self.y.iter().map(|v| idx(v)).collect::<Result<Vec<_>>>()?;
        let z = self.z.iter().map(|v| idx(v)).collect::<Result<Vec<_>>>()?;
        Ok((net, y, z))
    }
}

fn net_index(vertices: &[VertexSpec], id: &str) -> Option<usize> {
    vertices.iter().position(|v| v.id == id)
}
