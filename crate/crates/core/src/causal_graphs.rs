//! Directed acyclic causal structures, Markov constraint extraction, the
//! canonical network builders, and the composite-variable merge/split maps
//! used to move between Bell scenarios and networks.
//!
//! Scenario node names are part of the public contract:
//!
//! - `bell()`: observed `A1, A2, X1, X2`, latent `Lambda1`.
//! - `bell_md()`: adds latent `U1, U2` and the `Lambda1 -> X1, X2` influences.
//! - `bell_md_aux()`: observed `X1, X2, R`, latent `U1, U2, Lambda1`; the
//!   auxiliary-variable structure whose entropic cone yields the three
//!   upper bounds on `I(X1,X2 : Lambda1)`.
//! - `multipartite_bell_md_aux(n)`: observed `X1..Xn, R`, latent `U1..Un,
//!   Lambda1`.
//! - `triangle()`: observed `Alpha, Beta, R`, latent `U1` (Alpha-R), `U2`
//!   (Beta-R), `Lambda1` (Alpha-Beta).
//! - `twos_and_n(n)`: observed `Alpha1..Alphan, R`; `Lambda1` feeds every
//!   `Alphai`, `Ui` feeds `Alphai` and `R`.
//! - `cyclic(n)`: observed `Alpha1..Alpha(n-1), R` in a ring of `n` pairwise
//!   sources `U1, Lambda1..Lambda(n-2), U2`.
//! - `nlocality_chain(n)`: observed `A1..A(n+1), X1, X(n+1)`, latent
//!   `Lambda1..Lambdan` along a chain.
//! - `nlocality_md_aux(n)`: the chain with composite outcome nodes
//!   `Alpha1..Alpha(n+1)` plus `R` closed into a cycle by `U1, U2`.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::probtab::{Distribution, VariableSpec};

/// Largest `n` accepted by the parameterized scenario builders.
pub const SCENARIO_MAX_N: usize = 8;

/// A node of a causal DAG.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct DagNode {
    pub name: String,
    pub latent: bool,
}

/// A directed acyclic graph with observed/latent node flags.
#[derive(Debug, Clone, PartialEq)]
pub struct Dag {
    nodes: Vec<DagNode>,
    edges: Vec<(usize, usize)>,
}

/// A grouped conditional-independence statement `I(A : B | C) = 0`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CiStatement {
    pub a: Vec<String>,
    pub b: Vec<String>,
    pub given: Vec<String>,
}

/// The source-independence equality `H(roots jointly) = sum_i H(root_i)`
/// over the latent root nodes.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SourceIndependence {
    pub roots: Vec<String>,
}

#[derive(Serialize, Deserialize)]
struct DagJson {
    nodes: Vec<DagNode>,
    edges: Vec<[String; 2]>,
}

impl Dag {
    /// Builds and validates a DAG from `(name, latent)` node declarations and
    /// named edges.
    pub fn new(nodes: Vec<(String, bool)>, edges: Vec<(String, String)>) -> Result<Self> {
        let nodes: Vec<DagNode> = nodes
            .into_iter()
            .map(|(name, latent)| DagNode { name, latent })
            .collect();
        for (i, n) in nodes.iter().enumerate() {
            if nodes[..i].iter().any(|m| m.name == n.name) {
                return Err(Error::InvalidArgument(format!(
                    "duplicate node name `{}`",
                    n.name
                )));
            }
        }
        let index = |name: &str| -> Result<usize> {
            nodes
                .iter()
                .position(|n| n.name == name)
                .ok_or_else(|| Error::UnknownVariable(name.to_string()))
        };
        let mut edge_idx = Vec::with_capacity(edges.len());
        for (from, to) in &edges {
            let e = (index(from)?, index(to)?);
            if e.0 == e.1 {
                return Err(Error::InvalidArgument(format!("self loop at `{from}`")));
            }
            if !edge_idx.contains(&e) {
                edge_idx.push(e);
            }
        }
        let dag = Self {
            nodes,
            edges: edge_idx,
        };
        if dag.topological_order().is_none() {
            return Err(Error::InvalidArgument("graph contains a cycle".into()));
        }
        Ok(dag)
    }

    fn from_parts(nodes: Vec<(&str, bool)>, edges: Vec<(&str, &str)>) -> Self {
        Dag::new(
            nodes.into_iter().map(|(n, l)| (n.to_string(), l)).collect(),
            edges
                .into_iter()
                .map(|(a, b)| (a.to_string(), b.to_string()))
                .collect(),
        )
        .expect("builder scenarios are valid by construction")
    }

    pub fn nodes(&self) -> &[DagNode] {
        &self.nodes
    }

    pub fn node_names(&self) -> Vec<&str> {
        self.nodes.iter().map(|n| n.name.as_str()).collect()
    }

    pub fn observed_names(&self) -> Vec<&str> {
        self.nodes
            .iter()
            .filter(|n| !n.latent)
            .map(|n| n.name.as_str())
            .collect()
    }

    pub fn edges(&self) -> impl Iterator<Item = (&str, &str)> {
        self.edges
            .iter()
            .map(|&(a, b)| (self.nodes[a].name.as_str(), self.nodes[b].name.as_str()))
    }

    pub fn node_count(&self) -> usize {
        self.nodes.len()
    }

    pub fn index_of(&self, name: &str) -> Result<usize> {
        self.nodes
            .iter()
            .position(|n| n.name == name)
            .ok_or_else(|| Error::UnknownVariable(name.to_string()))
    }

    /// Parent indices of node `i`, in node order.
    pub fn parents(&self, i: usize) -> Vec<usize> {
        let mut ps: Vec<usize> = self
            .edges
            .iter()
            .filter(|&&(_, t)| t == i)
            .map(|&(s, _)| s)
            .collect();
        ps.sort_unstable();
        ps
    }

    fn children(&self, i: usize) -> Vec<usize> {
        self.edges
            .iter()
            .filter(|&&(s, _)| s == i)
            .map(|&(_, t)| t)
            .collect()
    }

    /// Topological order, or `None` if the graph is cyclic.
    pub fn topological_order(&self) -> Option<Vec<usize>> {
        let n = self.nodes.len();
        let mut indeg = vec![0usize; n];
        for &(_, t) in &self.edges {
            indeg[t] += 1;
        }
        let mut queue: Vec<usize> = (0..n).filter(|&i| indeg[i] == 0).collect();
        queue.sort_unstable();
        let mut order = Vec::with_capacity(n);
        let mut head = 0;
        while head < queue.len() {
            let v = queue[head];
            head += 1;
            order.push(v);
            let mut freed: Vec<usize> = Vec::new();
            for c in self.children(v) {
                indeg[c] -= 1;
                if indeg[c] == 0 {
                    freed.push(c);
                }
            }
            freed.sort_unstable();
            queue.extend(freed);
        }
        (order.len() == n).then_some(order)
    }

    /// Descendant set of each node (transitive closure), excluding the node
    /// itself.
    pub fn descendants(&self) -> Vec<Vec<bool>> {
        let n = self.nodes.len();
        let mut desc = vec![vec![false; n]; n];
        let order = self.topological_order().expect("validated acyclic");
        for &v in order.iter().rev() {
            for c in self.children(v) {
                desc[v][c] = true;
                for j in 0..n {
                    if desc[c][j] {
                        desc[v][j] = true;
                    }
                }
            }
        }
        desc
    }

    /// One grouped local Markov statement per node with a nonempty
    /// nondescendant set beyond its parents: `I(v : ND(v) \ Pa(v) | Pa(v)) = 0`.
    /// Deterministic: nodes and set members are emitted in node order.
    pub fn local_markov_constraints(&self) -> Vec<CiStatement> {
        let n = self.nodes.len();
        let desc = self.descendants();
        let mut out = Vec::new();
        for v in 0..n {
            let pa = self.parents(v);
            let rest: Vec<usize> = (0..n)
                .filter(|&u| u != v && !desc[v][u] && !pa.contains(&u))
                .collect();
            if rest.is_empty() {
                continue;
            }
            out.push(CiStatement {
                a: vec![self.nodes[v].name.clone()],
                b: rest.iter().map(|&u| self.nodes[u].name.clone()).collect(),
                given: pa.iter().map(|&u| self.nodes[u].name.clone()).collect(),
            });
        }
        out
    }

    /// Latent root nodes, in node order.
    pub fn latent_roots(&self) -> Vec<&str> {
        (0..self.nodes.len())
            .filter(|&i| self.nodes[i].latent && self.parents(i).is_empty())
            .map(|i| self.nodes[i].name.as_str())
            .collect()
    }

    /// The source-independence equality over the latent roots. Requires at
    /// least two latent root nodes.
    pub fn source_independence_constraint(&self) -> Result<SourceIndependence> {
        let roots = self.latent_roots();
        if roots.len() < 2 {
            return Err(Error::InvalidArgument(format!(
                "source independence needs at least 2 latent roots, found {}",
                roots.len()
            )));
        }
        Ok(SourceIndependence {
            roots: roots.into_iter().map(|s| s.to_string()).collect(),
        })
    }

    /// Graph isomorphism respecting the latent flag. Brute-force backtracking;
    /// the scenarios here have at most a dozen nodes.
    pub fn is_isomorphic_to(&self, other: &Dag) -> bool {
        let n = self.nodes.len();
        if n != other.nodes.len() || self.edges.len() != other.edges.len() {
            return false;
        }
        let sig = |d: &Dag, i: usize| {
            (
                d.nodes[i].latent,
                d.parents(i).len(),
                d.children(i).len(),
            )
        };
        let mut mapping = vec![usize::MAX; n];
        let mut used = vec![false; n];
        let self_adj: Vec<Vec<bool>> = {
            let mut a = vec![vec![false; n]; n];
            for &(s, t) in &self.edges {
                a[s][t] = true;
            }
            a
        };
        let other_adj: Vec<Vec<bool>> = {
            let mut a = vec![vec![false; n]; n];
            for &(s, t) in &other.edges {
                a[s][t] = true;
            }
            a
        };
        fn assign(
            v: usize,
            n: usize,
            mapping: &mut Vec<usize>,
            used: &mut Vec<bool>,
            ok_pair: &dyn Fn(usize, usize) -> bool,
            consistent: &dyn Fn(&[usize], usize, usize) -> bool,
        ) -> bool {
            if v == n {
                return true;
            }
            for w in 0..n {
                if !used[w] && ok_pair(v, w) && consistent(mapping, v, w) {
                    mapping[v] = w;
                    used[w] = true;
                    if assign(v + 1, n, mapping, used, ok_pair, consistent) {
                        return true;
                    }
                    mapping[v] = usize::MAX;
                    used[w] = false;
                }
            }
            false
        }
        let ok_pair = |v: usize, w: usize| sig(self, v) == sig(other, w);
        let consistent = |mapping: &[usize], v: usize, w: usize| {
            (0..v).all(|u| {
                let x = mapping[u];
                self_adj[u][v] == other_adj[x][w] && self_adj[v][u] == other_adj[w][x]
            })
        };
        assign(0, n, &mut mapping, &mut used, &ok_pair, &consistent)
    }

    /// Parses the JSON DAG format
    /// `{"nodes":[{"name":"X","latent":false},...],"edges":[["Lambda","A"],...]}`.
    pub fn from_json(json: &str) -> Result<Self> {
        let raw: DagJson = serde_json::from_str(json)?;
        Dag::new(
            raw.nodes.into_iter().map(|n| (n.name, n.latent)).collect(),
            raw.edges
                .into_iter()
                .map(|[a, b]| (a, b))
                .collect(),
        )
    }

    /// Serializes to the JSON DAG format.
    pub fn to_json(&self) -> String {
        let raw = DagJson {
            nodes: self.nodes.clone(),
            edges: self
                .edges
                .iter()
                .map(|&(a, b)| [self.nodes[a].name.clone(), self.nodes[b].name.clone()])
                .collect(),
        };
        serde_json::to_string(&raw).expect("dag serialization cannot fail")
    }
}

fn check_n(n: usize, min: usize) -> Result<()> {
    if n < min || n > SCENARIO_MAX_N {
        return Err(Error::Capacity(format!(
            "scenario parameter n={n} outside supported range {min}..={SCENARIO_MAX_N}"
        )));
    }
    Ok(())
}

/// The plain bipartite Bell structure: one latent source feeding both
/// outcomes, free inputs.
pub fn bell() -> Dag {
    Dag::from_parts(
        vec![
            ("A1", false),
            ("A2", false),
            ("X1", false),
            ("X2", false),
            ("Lambda1", true),
        ],
        vec![
            ("X1", "A1"),
            ("X2", "A2"),
            ("Lambda1", "A1"),
            ("Lambda1", "A2"),
        ],
    )
}

/// Bell with measurement dependence: private randomness sources `U1, U2` and
/// a direct influence of the source on the inputs.
pub fn bell_md() -> Dag {
    Dag::from_parts(
        vec![
            ("A1", false),
            ("A2", false),
            ("X1", false),
            ("X2", false),
            ("U1", true),
            ("U2", true),
            ("Lambda1", true),
        ],
        vec![
            ("X1", "A1"),
            ("X2", "A2"),
            ("Lambda1", "A1"),
            ("Lambda1", "A2"),
            ("Lambda1", "X1"),
            ("Lambda1", "X2"),
            ("U1", "X1"),
            ("U2", "X2"),
        ],
    )
}

/// The measurement-dependence structure with the auxiliary outcome `R` read
/// off the private sources. Outcome nodes are absorbed into the inputs; the
/// six variables here are exactly the ones entering the entropic bounds.
pub fn bell_md_aux() -> Dag {
    Dag::from_parts(
        vec![
            ("X1", false),
            ("X2", false),
            ("R", false),
            ("U1", true),
            ("U2", true),
            ("Lambda1", true),
        ],
        vec![
            ("U1", "X1"),
            ("Lambda1", "X1"),
            ("U2", "X2"),
            ("Lambda1", "X2"),
            ("U1", "R"),
            ("U2", "R"),
        ],
    )
}

/// n-party generalization of [`bell_md_aux`].
pub fn multipartite_bell_md_aux(n: usize) -> Result<Dag> {
    check_n(n, 1)?;
    let mut nodes = Vec::new();
    let mut edges = Vec::new();
    for i in 1..=n {
        nodes.push((format!("X{i}"), false));
    }
    nodes.push(("R".to_string(), false));
    for i in 1..=n {
        nodes.push((format!("U{i}"), true));
    }
    nodes.push(("Lambda1".to_string(), true));
    for i in 1..=n {
        edges.push((format!("U{i}"), format!("X{i}")));
        edges.push(("Lambda1".to_string(), format!("X{i}")));
        edges.push((format!("U{i}"), "R".to_string()));
    }
    Dag::new(nodes, edges)
}

/// The triangle network: three pairwise independent sources, three observed
/// nodes.
pub fn triangle() -> Dag {
    Dag::from_parts(
        vec![
            ("Alpha", false),
            ("Beta", false),
            ("R", false),
            ("U1", true),
            ("U2", true),
            ("Lambda1", true),
        ],
        vec![
            ("Lambda1", "Alpha"),
            ("Lambda1", "Beta"),
            ("U1", "Alpha"),
            ("U1", "R"),
            ("U2", "Beta"),
            ("U2", "R"),
        ],
    )
}

/// The "2's & n" network: one n-way source feeding `Alpha1..Alphan` and n
/// pairwise sources each feeding one `Alphai` and `R`.
pub fn twos_and_n(n: usize) -> Result<Dag> {
    check_n(n, 2)?;
    let mut nodes = Vec::new();
    let mut edges = Vec::new();
    for i in 1..=n {
        nodes.push((format!("Alpha{i}"), false));
    }
    nodes.push(("R".to_string(), false));
    for i in 1..=n {
        nodes.push((format!("U{i}"), true));
    }
    nodes.push(("Lambda1".to_string(), true));
    for i in 1..=n {
        edges.push(("Lambda1".to_string(), format!("Alpha{i}")));
        edges.push((format!("U{i}"), format!("Alpha{i}")));
        edges.push((format!("U{i}"), "R".to_string()));
    }
    Dag::new(nodes, edges)
}

/// The cyclic network of degree `n`: observed `Alpha1..Alpha(n-1), R` in a
/// ring, each adjacent pair sharing a source. `U1` closes `R - Alpha1` and
/// `U2` closes `Alpha(n-1) - R`.
pub fn cyclic(n: usize) -> Result<Dag> {
    check_n(n, 3)?;
    let m = n - 1;
    let mut nodes = Vec::new();
    let mut edges = Vec::new();
    for i in 1..=m {
        nodes.push((format!("Alpha{i}"), false));
    }
    nodes.push(("R".to_string(), false));
    nodes.push(("U1".to_string(), true));
    nodes.push(("U2".to_string(), true));
    for i in 1..=n - 2 {
        nodes.push((format!("Lambda{i}"), true));
    }
    edges.push(("U1".to_string(), "R".to_string()));
    edges.push(("U1".to_string(), "Alpha1".to_string()));
    edges.push(("U2".to_string(), format!("Alpha{m}")));
    edges.push(("U2".to_string(), "R".to_string()));
    for i in 1..=n - 2 {
        edges.push((format!("Lambda{i}"), format!("Alpha{i}")));
        edges.push((format!("Lambda{i}"), format!("Alpha{}", i + 1)));
    }
    Dag::new(nodes, edges)
}

/// The linear chain n-locality scenario: `n + 1` parties, only the endpoints
/// have inputs, adjacent parties share a source.
pub fn nlocality_chain(n: usize) -> Result<Dag> {
    check_n(n, 1)?;
    let mut nodes = Vec::new();
    let mut edges = Vec::new();
    for i in 1..=n + 1 {
        nodes.push((format!("A{i}"), false));
    }
    nodes.push(("X1".to_string(), false));
    nodes.push((format!("X{}", n + 1), false));
    for i in 1..=n {
        nodes.push((format!("Lambda{i}"), true));
    }
    edges.push(("X1".to_string(), "A1".to_string()));
    edges.push((format!("X{}", n + 1), format!("A{}", n + 1)));
    for i in 1..=n {
        edges.push((format!("Lambda{i}"), format!("A{i}")));
        edges.push((format!("Lambda{i}"), format!("A{}", i + 1)));
    }
    Dag::new(nodes, edges)
}

/// The chain with composite outcomes `Alpha1..Alpha(n+1)` closed into a cycle
/// through the auxiliary node `R`. Graph-isomorphic to `cyclic(n + 2)`.
pub fn nlocality_md_aux(n: usize) -> Result<Dag> {
    check_n(n, 1)?;
    let mut nodes = Vec::new();
    let mut edges = Vec::new();
    for i in 1..=n + 1 {
        nodes.push((format!("Alpha{i}"), false));
    }
    nodes.push(("R".to_string(), false));
    nodes.push(("U1".to_string(), true));
    nodes.push(("U2".to_string(), true));
    for i in 1..=n {
        nodes.push((format!("Lambda{i}"), true));
    }
    edges.push(("U1".to_string(), "Alpha1".to_string()));
    edges.push(("U1".to_string(), "R".to_string()));
    edges.push(("U2".to_string(), format!("Alpha{}", n + 1)));
    edges.push(("U2".to_string(), "R".to_string()));
    for i in 1..=n {
        edges.push((format!("Lambda{i}"), format!("Alpha{i}")));
        edges.push((format!("Lambda{i}"), format!("Alpha{}", i + 1)));
    }
    Dag::new(nodes, edges)
}

/// Builds a scenario by name. `params` is the arity for the parameterized
/// families and ignored otherwise.
pub fn scenario(name: &str, params: Option<usize>) -> Result<Dag> {
    let need_n = || {
        params.ok_or_else(|| Error::InvalidArgument(format!("scenario `{name}` needs a parameter n")))
    };
    match name {
        "bell" => Ok(bell()),
        "bell-md" => Ok(bell_md()),
        "bell-md-aux" => Ok(bell_md_aux()),
        "multipartite-bell-md-aux" => multipartite_bell_md_aux(need_n()?),
        "triangle" => Ok(triangle()),
        "twos-and-n" => twos_and_n(need_n()?),
        "cyclic" => cyclic(need_n()?),
        "nlocality-chain" => nlocality_chain(need_n()?),
        "nlocality-md-aux" => nlocality_md_aux(need_n()?),
        _ => Err(Error::NotFound(format!("scenario `{name}`"))),
    }
}

/// Merges disjoint groups of variables into composite variables. The new
/// variable takes the position of the group's first member; values are
/// encoded mixed-radix with the first member most significant. A bijective
/// recoding: probabilities are rearranged, never altered.
pub fn merge_variables(dist: &Distribution, groups: &[(&str, &[&str])]) -> Result<Distribution> {
    let vars = dist.variables();
    let n = vars.len();
    // group id per original variable, plus member order inside the group
    let mut group_of: Vec<Option<(usize, usize)>> = vec![None; n];
    for (g, (new_name, members)) in groups.iter().enumerate() {
        if members.is_empty() {
            return Err(Error::InvalidArgument(format!(
                "group `{new_name}` has no members"
            )));
        }
        for (k, m) in members.iter().enumerate() {
            let i = dist.index_of(m)?;
            if group_of[i].is_some() {
                return Err(Error::InvalidArgument(format!(
                    "variable `{m}` appears in more than one group"
                )));
            }
            group_of[i] = Some((g, k));
        }
    }
    // output variable layout
    let mut out_vars: Vec<VariableSpec> = Vec::new();
    let mut emitted = vec![false; groups.len()];
    // for each output variable: either Single(orig index) or Group(g)
    enum Slot {
        Single(usize),
        Group(usize),
    }
    let mut slots: Vec<Slot> = Vec::new();
    for i in 0..n {
        match group_of[i] {
            None => {
                out_vars.push(vars[i].clone());
                slots.push(Slot::Single(i));
            }
            Some((g, 0)) => {
                let card: usize = groups[g]
                    .1
                    .iter()
                    .map(|m| vars[dist.index_of(m).unwrap()].cardinality)
                    .product();
                if vars.iter().any(|v| v.name == groups[g].0)
                    && !groups[g].1.contains(&groups[g].0)
                {
                    return Err(Error::InvalidArgument(format!(
                        "composite name `{}` collides with an existing variable",
                        groups[g].0
                    )));
                }
                out_vars.push(VariableSpec::new(groups[g].0, card));
                slots.push(Slot::Group(g));
                emitted[g] = true;
            }
            Some(_) => {} // non-leading member: dropped from the layout
        }
    }
    if !emitted.iter().all(|&e| e) {
        return Err(Error::InvalidArgument("group with unknown members".into()));
    }
    let member_indices: Vec<Vec<usize>> = groups
        .iter()
        .map(|(_, ms)| ms.iter().map(|m| dist.index_of(m).unwrap()).collect())
        .collect();

    let out_strides = {
        let mut s = vec![1usize; out_vars.len()];
        for i in (0..out_vars.len().saturating_sub(1)).rev() {
            s[i] = s[i + 1] * out_vars[i + 1].cardinality;
        }
        s
    };
    let mut table = vec![0.0; dist.table().len()];
    let mut values = vec![0usize; n];
    for (idx, &p) in dist.table().iter().enumerate() {
        dist.decode(idx, &mut values);
        let mut o = 0usize;
        for (k, slot) in slots.iter().enumerate() {
            let v = match slot {
                Slot::Single(i) => values[*i],
                Slot::Group(g) => {
                    let mut code = 0usize;
                    for &mi in &member_indices[*g] {
                        code = code * vars[mi].cardinality + values[mi];
                    }
                    code
                }
            };
            o += v * out_strides[k];
        }
        table[o] = p;
    }
    Distribution::new(out_vars, table)
}

/// Splits a composite variable back into its members; the exact inverse of
/// [`merge_variables`]. The member cardinalities must multiply to the
/// composite cardinality.
pub fn split_variable(
    dist: &Distribution,
    name: &str,
    members: &[VariableSpec],
) -> Result<Distribution> {
    let pos = dist.index_of(name)?;
    let card = dist.variables()[pos].cardinality;
    let prod: usize = members.iter().map(|m| m.cardinality).product();
    if prod != card {
        return Err(Error::InvalidArgument(format!(
            "member cardinalities multiply to {prod}, composite has {card}"
        )));
    }
    let mut out_vars: Vec<VariableSpec> = Vec::new();
    for (i, v) in dist.variables().iter().enumerate() {
        if i == pos {
            out_vars.extend(members.iter().cloned());
        } else {
            out_vars.push(v.clone());
        }
    }
    let out_strides = {
        let mut s = vec![1usize; out_vars.len()];
        for i in (0..out_vars.len().saturating_sub(1)).rev() {
            s[i] = s[i + 1] * out_vars[i + 1].cardinality;
        }
        s
    };
    let n = dist.variables().len();
    let mut table = vec![0.0; dist.table().len()];
    let mut values = vec![0usize; n];
    for (idx, &p) in dist.table().iter().enumerate() {
        dist.decode(idx, &mut values);
        let mut o = 0usize;
        let mut k = 0usize;
        for (i, &val) in values.iter().enumerate() {
            if i == pos {
                // decode the composite value mixed-radix, first member most
                // significant
                let mut rem = val;
                let mut parts = vec![0usize; members.len()];
                for j in (0..members.len()).rev() {
                    parts[j] = rem % members[j].cardinality;
                    rem /= members[j].cardinality;
                }
                for part in parts {
                    o += part * out_strides[k];
                    k += 1;
                }
            } else {
                o += val * out_strides[k];
                k += 1;
            }
        }
        table[o] = p;
    }
    Distribution::new(out_vars, table)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::probtab::VariableSpec;

    #[test]
    fn rejects_cycles_and_bad_edges() {
        let cyclic = Dag::new(
            vec![("A".into(), false), ("B".into(), false)],
            vec![("A".into(), "B".into()), ("B".into(), "A".into())],
        );
        assert!(cyclic.is_err());
        let missing = Dag::new(vec![("A".into(), false)], vec![("A".into(), "B".into())]);
        assert!(missing.is_err());
    }

    #[test]
    fn local_markov_bell_md_aux() {
        let dag = bell_md_aux();
        let cs = dag.local_markov_constraints();
        // the grouped statement for R: I(R : X1, X2, Lambda1 | U1, U2) = 0
        let r = cs.iter().find(|c| c.a == vec!["R".to_string()]).unwrap();
        assert_eq!(r.given, vec!["U1".to_string(), "U2".to_string()]);
        let mut b = r.b.clone();
        b.sort();
        assert_eq!(b, vec!["Lambda1".to_string(), "X1".to_string(), "X2".to_string()]);
        // X1: I(X1 : X2, R, U2 | U1, Lambda1) = 0
        let x1 = cs.iter().find(|c| c.a == vec!["X1".to_string()]).unwrap();
        let mut b = x1.b.clone();
        b.sort();
        assert_eq!(b, vec!["R".to_string(), "U2".to_string(), "X2".to_string()]);
        let mut g = x1.given.clone();
        g.sort();
        assert_eq!(g, vec!["Lambda1".to_string(), "U1".to_string()]);
    }

    #[test]
    fn local_markov_chain_and_complete() {
        let chain = Dag::new(
            vec![("A".into(), false), ("B".into(), false), ("C".into(), false)],
            vec![("A".into(), "B".into()), ("B".into(), "C".into())],
        )
        .unwrap();
        let cs = chain.local_markov_constraints();
        assert!(cs.contains(&CiStatement {
            a: vec!["C".into()],
            b: vec!["A".into()],
            given: vec!["B".into()],
        }));

        let complete = Dag::new(
            vec![("A".into(), false), ("B".into(), false), ("C".into(), false)],
            vec![
                ("A".into(), "B".into()),
                ("A".into(), "C".into()),
                ("B".into(), "C".into()),
            ],
        )
        .unwrap();
        assert!(complete.local_markov_constraints().is_empty());
    }

    #[test]
    fn markov_constraints_deterministic() {
        for dag in [bell(), bell_md_aux(), triangle(), twos_and_n(3).unwrap()] {
            assert_eq!(dag.local_markov_constraints(), dag.local_markov_constraints());
        }
    }

    #[test]
    fn source_independence() {
        let si = bell_md_aux().source_independence_constraint().unwrap();
        assert_eq!(si.roots, vec!["U1".to_string(), "U2".to_string(), "Lambda1".to_string()]);
        let tri = triangle().source_independence_constraint().unwrap();
        assert_eq!(tri.roots.len(), 3);
        // one latent root only
        assert!(bell().source_independence_constraint().is_err());
    }

    #[test]
    fn network_isomorphisms() {
        assert!(twos_and_n(2).unwrap().is_isomorphic_to(&triangle()));
        assert!(cyclic(3).unwrap().is_isomorphic_to(&triangle()));
        assert!(cyclic(3).unwrap().is_isomorphic_to(&twos_and_n(2).unwrap()));
        assert!(nlocality_md_aux(2).unwrap().is_isomorphic_to(&cyclic(4).unwrap()));
        assert!(!bell().is_isomorphic_to(&triangle()));
        assert!(!cyclic(4).unwrap().is_isomorphic_to(&twos_and_n(3).unwrap()));
    }

    #[test]
    fn scenario_capacity_errors() {
        assert!(matches!(twos_and_n(9), Err(Error::Capacity(_))));
        assert!(matches!(cyclic(2), Err(Error::Capacity(_))));
        assert!(scenario("twos-and-n", Some(2)).is_ok());
        assert!(scenario("nosuch", None).is_err());
    }

    #[test]
    fn dag_json_round_trip() {
        let dag = triangle();
        let back = Dag::from_json(&dag.to_json()).unwrap();
        assert_eq!(dag, back);
        assert!(dag.to_json().contains("\"latent\""));
    }

    fn dist(vars: &[(&str, usize)], table: &[f64]) -> Distribution {
        Distribution::new(
            vars.iter().map(|&(n, c)| VariableSpec::new(n, c)).collect(),
            table.to_vec(),
        )
        .unwrap()
    }

    #[test]
    fn merge_preserves_entropy_and_inverts() {
        // a correlated three-bit distribution with full support
        let mut t = Vec::with_capacity(8);
        let mut z = 0.0;
        for i in 0..8 {
            let w = 1.0 + i as f64 + if i % 3 == 0 { 2.0 } else { 0.0 };
            t.push(w);
            z += w;
        }
        for v in &mut t {
            *v /= z;
        }
        let d = dist(&[("A", 2), ("X", 2), ("B", 2)], &t);

        let merged = merge_variables(&d, &[("Alpha", &["A", "X"])]).unwrap();
        assert_eq!(merged.variables()[0].name, "Alpha");
        assert_eq!(merged.variables()[0].cardinality, 4);
        let h_alpha = merged.entropy(&["Alpha"]).unwrap();
        let h_ax = d.entropy(&["A", "X"]).unwrap();
        assert!((h_alpha - h_ax).abs() < 1e-12);

        let split = split_variable(
            &merged,
            "Alpha",
            &[VariableSpec::new("A", 2), VariableSpec::new("X", 2)],
        )
        .unwrap();
        assert_eq!(split, d);
    }

    #[test]
    fn merge_noncontiguous_members_round_trip() {
        let mut t = Vec::with_capacity(8);
        let mut z = 0.0;
        for i in 0..8 {
            let w = (i as f64 + 1.0).sqrt();
            t.push(w);
            z += w;
        }
        for v in &mut t {
            *v /= z;
        }
        let d = dist(&[("A", 2), ("X", 2), ("B", 2)], &t);
        // group members that are not adjacent in the layout
        let merged = merge_variables(&d, &[("G", &["A", "B"])]).unwrap();
        assert_eq!(
            merged.variables().iter().map(|v| v.name.as_str()).collect::<Vec<_>>(),
            vec!["G", "X"]
        );
        let back = split_variable(
            &merged,
            "G",
            &[VariableSpec::new("A", 2), VariableSpec::new("B", 2)],
        )
        .unwrap();
        // order after split: G's slot expands in place
        assert_eq!(
            back.variables().iter().map(|v| v.name.as_str()).collect::<Vec<_>>(),
            vec!["A", "B", "X"]
        );
        let h1 = back.entropy(&["A", "B", "X"]).unwrap();
        let h2 = d.entropy(&["A", "B", "X"]).unwrap();
        assert!((h1 - h2).abs() < 1e-12);
    }

    #[test]
    fn merge_rejects_overlap() {
        let d = dist(&[("A", 2), ("B", 2)], &[0.25; 4]);
        let err = merge_variables(&d, &[("G", &["A", "B"]), ("H", &["B"])]);
        assert!(err.is_err());
    }

    #[test]
    fn split_rejects_cardinality_mismatch() {
        let d = dist(&[("G", 4)], &[0.25; 4]);
        let err = split_variable(
            &d,
            "G",
            &[VariableSpec::new("A", 2), VariableSpec::new("B", 3)],
        );
        assert!(err.is_err());
    }
}
