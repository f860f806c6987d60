//! Arc sets on `[n]` (saturation, strongly active and possibly active
//! graphs) and their Graphviz export.

use std::collections::BTreeSet;
use std::fmt::Write;

use serde::{Deserialize, Serialize};

use crate::error::Result;
use crate::matrix::TropicalMatrix;
use crate::omega::{omega_matvec, Threshold};
use crate::scalar::ExtScalar;

/// A directed graph on nodes `0..n`, arcs kept in row-major order.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct ArcSet {
    pub n: usize,
    pub arcs: BTreeSet<(usize, usize)>,
}

impl ArcSet {
    pub fn empty(n: usize) -> Self {
        ArcSet {
            n,
            arcs: BTreeSet::new(),
        }
    }

    /// Arcs at the finite entries of `m`.
    pub fn finite_entries(m: &TropicalMatrix) -> Self {
        let n = m.n();
        let arcs = (0..n)
            .flat_map(|i| (0..n).map(move |j| (i, j)))
            .filter(|&(i, j)| m.get(i, j).is_finite())
            .collect();
        ArcSet { n, arcs }
    }

    pub fn contains(&self, i: usize, j: usize) -> bool {
        self.arcs.contains(&(i, j))
    }

    pub fn is_subset(&self, other: &ArcSet) -> bool {
        self.arcs.is_subset(&other.arcs)
    }

    pub fn len(&self) -> usize {
        self.arcs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.arcs.is_empty()
    }

    /// Whether the closed walk `cycle` uses only arcs of this graph.
    pub fn contains_cycle(&self, cycle: &[usize]) -> bool {
        !cycle.is_empty()
            && cycle
                .iter()
                .enumerate()
                .all(|(k, &i)| self.contains(i, cycle[(k + 1) % cycle.len()]))
    }

    /// Graphviz digraph with 1-based node names. Arcs are labelled with the
    /// corresponding entry of `weights`; arcs in `bold` are drawn bold.
    pub fn to_dot(&self, name: &str, weights: &TropicalMatrix, bold: Option<&ArcSet>) -> String {
        let mut out = String::new();
        let _ = writeln!(out, "digraph {name} {{");
        for v in 1..=self.n {
            let _ = writeln!(out, "  {v};");
        }
        for &(i, j) in &self.arcs {
            let style = match bold {
                Some(b) if b.contains(i, j) => ", style=bold",
                _ => "",
            };
            let _ = writeln!(
                out,
                "  {} -> {} [label=\"{}\"{style}];",
                i + 1,
                j + 1,
                weights.get(i, j)
            );
        }
        out.push_str("}\n");
        out
    }
}

/// `Sat(A, ω, x)`: arcs `(i, j)` with `(A ⊗_ω x)_i = A(i,j) + x_j`.
pub fn saturation_graph(a: &TropicalMatrix, t: Threshold, x: &[ExtScalar]) -> Result<ArcSet> {
    let image = omega_matvec(a, x, t)?;
    let n = a.n();
    let mut arcs = BTreeSet::new();
    for (i, yi) in image.iter().enumerate() {
        for (j, xj) in x.iter().enumerate() {
            if a.get(i, j).trop_mul(xj)? == *yi {
                arcs.insert((i, j));
            }
        }
    }
    Ok(ArcSet { n, arcs })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn saturation_example() {
        let a = TropicalMatrix::from_ints(&[[4, 7, 2], [5, 2, 5], [6, 3, 1]]);
        let t = Threshold::new(2, 3).unwrap();
        let x: Vec<ExtScalar> = [0, 1, 0].iter().map(|&v| ExtScalar::int(v)).collect();
        let sat = saturation_graph(&a, t, &x).unwrap();
        assert!(sat.contains(0, 0));
        assert!(sat.contains(1, 2));
        assert!(sat.contains(2, 1));
        assert!(sat.contains_cycle(&[1, 2]));
        assert!(sat.contains_cycle(&[0]));
        assert!(!sat.contains_cycle(&[0, 2]));
    }

    #[test]
    fn dot_is_row_major_and_one_based() {
        let a = TropicalMatrix::from_ints(&[[1, 2], [3, 4]]);
        let g = ArcSet::finite_entries(&a);
        let mut bold = ArcSet::empty(2);
        bold.arcs.insert((1, 0));
        let dot = g.to_dot("g", &a, Some(&bold));
        let expected = "digraph g {\n  1;\n  2;\n  1 -> 1 [label=\"1\"];\n  1 -> 2 [label=\"2\"];\n  2 -> 1 [label=\"3\", style=bold];\n  2 -> 2 [label=\"4\"];\n}\n";
        assert_eq!(dot, expected);
    }
}
