use alloc::collections::BTreeSet;
use alloc::string::{String, ToString};
use alloc::vec::Vec;
use alloc::{format, vec};
use core::fmt;

use super::clustering::Clustering;
use crate::error::{Error, Result};

#[derive(Debug, Clone)]
enum Node {
    Leaf { element: usize },
    Internal { left: usize, right: usize, height: Option<f64> },
}

/// A binary rooted tree whose leaves are in bijection with `0..n`.
///
/// Equality is structural: two dendrograms are equal when they induce the same
/// set of node clusters. Child order and merge heights are ignored.
#[derive(Debug, Clone)]
pub struct Dendrogram {
    nodes: Vec<Node>,
    root: usize,
    n: usize,
}

impl Dendrogram {
    /// Builds a dendrogram from a merge sequence.
    ///
    /// Node ids `0..n` are the leaves (leaf `i` is element `i`); merge `t`
    /// creates node `n + t` joining two earlier, not yet merged nodes. Exactly
    /// `n - 1` merges are required.
    pub fn from_merges(n: usize, merges: &[(usize, usize, Option<f64>)]) -> Result<Self> {
        let mut nodes: Vec<Node> = (0..n).map(|element| Node::Leaf { element }).collect();
        let mut used = vec![false; n + merges.len()];
        for (t, &(left, right, height)) in merges.iter().enumerate() {
            let id = n + t;
            for child in [left, right] {
                if child >= id {
                    return Err(Error::InvalidDendrogram(format!("merge {t} refers to future node {child}")));
                }
                if used[child] {
                    return Err(Error::InvalidDendrogram(format!("node {child} merged twice")));
                }
                used[child] = true;
            }
            if left == right {
                return Err(Error::InvalidDendrogram(format!("merge {t} joins node {left} with itself")));
            }
            nodes.push(Node::Internal { left, right, height });
        }
        Self::from_nodes(nodes, n)
    }

    fn from_nodes(nodes: Vec<Node>, n: usize) -> Result<Self> {
        if n == 0 {
            return Err(Error::InvalidDendrogram("no leaves".to_string()));
        }
        if nodes.len() != 2 * n - 1 {
            return Err(Error::InvalidDendrogram(format!(
                "{} nodes for {n} leaves; a binary tree needs {}",
                nodes.len(),
                2 * n - 1
            )));
        }
        let mut parents = vec![0usize; nodes.len()];
        let mut seen_leaf = vec![false; n];
        for node in &nodes {
            match *node {
                Node::Leaf { element } => {
                    if element >= n || seen_leaf[element] {
                        return Err(Error::InvalidDendrogram(format!("leaf map is not a bijection at {element}")));
                    }
                    seen_leaf[element] = true;
                }
                Node::Internal { left, right, .. } => {
                    parents[left] += 1;
                    parents[right] += 1;
                }
            }
        }
        let roots: Vec<usize> = (0..nodes.len()).filter(|&i| parents[i] == 0).collect();
        if roots.len() != 1 || parents.iter().any(|&p| p > 1) {
            return Err(Error::InvalidDendrogram("nodes do not form a single rooted tree".to_string()));
        }
        let d = Self { nodes, root: roots[0], n };
        // Reachability: every leaf must sit under the root.
        if d.leaves_under(d.root).len() != n {
            return Err(Error::InvalidDendrogram("tree contains a cycle".to_string()));
        }
        Ok(d)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    fn leaves_under(&self, node: usize) -> Vec<usize> {
        let mut out = Vec::new();
        let mut stack = vec![node];
        while let Some(v) = stack.pop() {
            if out.len() > self.n {
                break;
            }
            match self.nodes[v] {
                Node::Leaf { element } => out.push(element),
                Node::Internal { left, right, .. } => {
                    stack.push(right);
                    stack.push(left);
                }
            }
        }
        out.sort_unstable();
        out
    }

    /// One sorted element set per tree node (`2n - 1` of them).
    pub fn node_clusters(&self) -> Vec<Vec<usize>> {
        let mut clusters: Vec<Option<Vec<usize>>> = vec![None; self.nodes.len()];
        for v in self.postorder() {
            let c = match self.nodes[v] {
                Node::Leaf { element } => vec![element],
                Node::Internal { left, right, .. } => {
                    let mut c = clusters[left].clone().unwrap_or_default();
                    c.extend(clusters[right].iter().flatten());
                    c.sort_unstable();
                    c
                }
            };
            clusters[v] = Some(c);
        }
        clusters.into_iter().map(Option::unwrap_or_default).collect()
    }

    /// The set of clusters of this dendrogram.
    pub fn clusters(&self) -> BTreeSet<Vec<usize>> {
        self.node_clusters().into_iter().collect()
    }

    /// Whether every block of `c` is a node cluster.
    pub fn outputs(&self, c: &Clustering) -> bool {
        if c.n() != self.n {
            return false;
        }
        let clusters = self.clusters();
        c.blocks().iter().all(|b| clusters.contains(b))
    }

    /// Every clustering (`1 < k < n`) this dendrogram outputs, in canonical order.
    pub fn clusterings(&self) -> Vec<Clustering> {
        let mut options: Vec<Vec<Vec<Vec<usize>>>> = vec![Vec::new(); self.nodes.len()];
        let clusters = self.node_clusters();
        for v in self.postorder() {
            let mut opts = vec![vec![clusters[v].clone()]];
            if let Node::Internal { left, right, .. } = self.nodes[v] {
                for a in &options[left] {
                    for b in &options[right] {
                        let mut cut = a.clone();
                        cut.extend(b.iter().cloned());
                        opts.push(cut);
                    }
                }
                options[left].clear();
                options[right].clear();
            }
            options[v] = opts;
        }
        let mut out: Vec<Clustering> = options[self.root]
            .iter()
            .filter_map(|blocks| Clustering::from_blocks(blocks, self.n).ok())
            .collect();
        out.sort();
        out
    }

    /// Heights recorded for internal nodes, in node order.
    pub fn merge_heights(&self) -> Vec<Option<f64>> {
        self.nodes
            .iter()
            .filter_map(|node| match node {
                Node::Internal { height, .. } => Some(*height),
                Node::Leaf { .. } => None,
            })
            .collect()
    }

    fn postorder(&self) -> Vec<usize> {
        let mut order = Vec::with_capacity(self.nodes.len());
        let mut stack = vec![(self.root, false)];
        while let Some((v, expanded)) = stack.pop() {
            match self.nodes[v] {
                Node::Internal { left, right, .. } if !expanded => {
                    stack.push((v, true));
                    stack.push((right, false));
                    stack.push((left, false));
                }
                _ => order.push(v),
            }
        }
        order
    }

    /// Canonical nested-parentheses form, e.g. `((0,1),(2,3));`.
    ///
    /// Children are written in order of their smallest element, so
    /// structurally equal dendrograms serialize identically.
    pub fn to_newick(&self) -> String {
        let clusters = self.node_clusters();
        let mut out = String::new();
        self.write_node(self.root, &clusters, &mut out);
        out.push(';');
        out
    }

    fn write_node(&self, v: usize, clusters: &[Vec<usize>], out: &mut String) {
        match self.nodes[v] {
            Node::Leaf { element } => out.push_str(&element.to_string()),
            Node::Internal { left, right, .. } => {
                let (a, b) = if clusters[left][0] <= clusters[right][0] { (left, right) } else { (right, left) };
                out.push('(');
                self.write_node(a, clusters, out);
                out.push(',');
                self.write_node(b, clusters, out);
                out.push(')');
            }
        }
    }

    /// Parses the form written by [`Dendrogram::to_newick`]. Whitespace is
    /// allowed between tokens; leaves must be exactly `0..n`.
    pub fn from_newick(text: &str) -> Result<Self> {
        let mut p = Parser { bytes: text.as_bytes(), pos: 0, nodes: Vec::new() };
        p.tree()?;
        p.skip_ws();
        p.expect(b';')?;
        p.skip_ws();
        if p.pos != p.bytes.len() {
            return Err(p.error("trailing input after ';'"));
        }
        let leaves = p.nodes.iter().filter(|n| matches!(n, Node::Leaf { .. })).count();
        Self::from_nodes(p.nodes, leaves)
    }
}

struct Parser<'a> {
    bytes: &'a [u8],
    pos: usize,
    nodes: Vec<Node>,
}

impl Parser<'_> {
    fn error(&self, message: &str) -> Error {
        Error::Parse { offset: self.pos, message: message.to_string() }
    }

    fn skip_ws(&mut self) {
        while self.pos < self.bytes.len() && self.bytes[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn expect(&mut self, b: u8) -> Result<()> {
        if self.bytes.get(self.pos) == Some(&b) {
            self.pos += 1;
            Ok(())
        } else {
            Err(self.error(&format!("expected '{}'", b as char)))
        }
    }

    fn tree(&mut self) -> Result<usize> {
        self.skip_ws();
        match self.bytes.get(self.pos) {
            Some(b'(') => {
                self.pos += 1;
                let left = self.tree()?;
                self.skip_ws();
                self.expect(b',')?;
                let right = self.tree()?;
                self.skip_ws();
                self.expect(b')')?;
                self.nodes.push(Node::Internal { left, right, height: None });
                Ok(self.nodes.len() - 1)
            }
            Some(c) if c.is_ascii_digit() => {
                let start = self.pos;
                while self.pos < self.bytes.len() && self.bytes[self.pos].is_ascii_digit() {
                    self.pos += 1;
                }
                let digits = core::str::from_utf8(&self.bytes[start..self.pos]).unwrap_or("");
                let element = digits.parse().map_err(|_| self.error("leaf index out of range"))?;
                self.nodes.push(Node::Leaf { element });
                Ok(self.nodes.len() - 1)
            }
            _ => Err(self.error("expected '(' or a leaf index")),
        }
    }
}

impl PartialEq for Dendrogram {
    fn eq(&self, other: &Self) -> bool {
        self.n == other.n && self.clusters() == other.clusters()
    }
}

impl Eq for Dendrogram {}

impl fmt::Display for Dendrogram {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_newick())
    }
}
