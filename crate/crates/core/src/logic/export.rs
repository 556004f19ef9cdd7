use std::fmt::Write;

use serde::Serialize;

use super::{ConcreteLogic, Shape};

/// JSON form of a logic. Elements appear in canonical order as hex-encoded
/// bit vectors (bit `i` is point `i`); atoms are indices into `delta`.
#[derive(Debug, Serialize)]
pub struct LogicExport {
    pub ground_size: usize,
    pub factors: Shape,
    pub delta: Vec<String>,
    pub atoms: Vec<usize>,
}

impl ConcreteLogic {
    pub fn export(&self) -> LogicExport {
        LogicExport {
            ground_size: self.ground.len(),
            factors: self.ground.shape().clone(),
            delta: self.events.iter().map(|e| e.members.to_hex()).collect(),
            atoms: self.atoms.iter().map(|a| a.0).collect(),
        }
    }

    /// Covering pairs `(lower, upper)` of the inclusion order.
    pub fn hasse_edges(&self) -> Vec<(usize, usize)> {
        let n = self.len();
        let mut edges = Vec::new();
        for q in 0..n {
            let below: Vec<usize> = (0..n)
                .filter(|&p| p != q && self.events[p].members.is_subset(&self.events[q].members))
                .collect();
            for &p in &below {
                let covered = below
                    .iter()
                    .all(|&r| r == p || !self.events[p].members.is_subset(&self.events[r].members));
                if covered {
                    edges.push((p, q));
                }
            }
        }
        edges.sort_unstable();
        edges
    }

    pub fn hasse_dot(&self) -> String {
        let mut out = String::from(
            "digraph hasse {\n  rankdir=BT;\n  node [shape=box, fontname=monospace];\n",
        );
        for (i, e) in self.events.iter().enumerate() {
            let _ = writeln!(out, "  e{i} [label=\"{}\"];", e.members.to_hex());
        }
        for (p, q) in self.hasse_edges() {
            let _ = writeln!(out, "  e{p} -> e{q};");
        }
        out.push_str("}\n");
        out
    }
}
