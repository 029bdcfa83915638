//! GTSP instance model: coordinates, integer cost matrices, cluster partitions,
//! TSPLIB / clustered-file I/O and the farthest-center clustering procedure.

use std::fmt::Write as _;

use serde::{Deserialize, Serialize};
use thiserror::Error;

/// Integer edge cost. Missing edges are represented by [`INFINITE_COST`].
pub type Cost = u64;

/// Cost of an edge that does not exist.
pub const INFINITE_COST: Cost = Cost::MAX;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum InstanceError {
    #[error("line {line}: {msg}")]
    Parse { line: usize, msg: String },
    #[error("invalid coordinates: {0}")]
    InvalidCoords(String),
    #[error("invalid cost matrix: {0}")]
    InvalidCosts(String),
    #[error("not a partition: node {node} appears in {count} clusters")]
    NotPartition { node: usize, count: usize },
    #[error("empty cluster {0}")]
    EmptyCluster(usize),
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
}

fn parse_err(line: usize, msg: impl Into<String>) -> InstanceError {
    InstanceError::Parse {
        line,
        msg: msg.into(),
    }
}

/// Planar node coordinates, node ids `0..n`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct NodeCoords {
    /// Problem name from the `NAME` record, empty for generated point sets.
    pub name: String,
    points: Vec<(f64, f64)>,
}

impl NodeCoords {
    pub fn new(name: impl Into<String>, points: Vec<(f64, f64)>) -> Result<Self, InstanceError> {
        if points.len() < 2 {
            return Err(InstanceError::InvalidCoords(format!(
                "need at least 2 points, got {}",
                points.len()
            )));
        }
        if let Some(i) = points
            .iter()
            .position(|(x, y)| !x.is_finite() || !y.is_finite())
        {
            return Err(InstanceError::InvalidCoords(format!(
                "point {i} is not finite"
            )));
        }
        Ok(Self {
            name: name.into(),
            points,
        })
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn points(&self) -> &[(f64, f64)] {
        &self.points
    }
}

/// Dense `n × n` matrix of non-negative integer costs with a zero diagonal.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CostMatrix {
    n: usize,
    cost: Vec<Cost>,
    symmetric: bool,
}

impl CostMatrix {
    /// Builds a matrix from a row-major buffer. The symmetry flag is derived
    /// from the data.
    pub fn from_flat(n: usize, cost: Vec<Cost>) -> Result<Self, InstanceError> {
        if cost.len() != n * n {
            return Err(InstanceError::InvalidCosts(format!(
                "expected {} entries for n = {n}, got {}",
                n * n,
                cost.len()
            )));
        }
        if let Some(i) = (0..n).find(|&i| cost[i * n + i] != 0) {
            return Err(InstanceError::InvalidCosts(format!(
                "diagonal entry ({i},{i}) is not zero"
            )));
        }
        let symmetric = (0..n).all(|i| (i + 1..n).all(|j| cost[i * n + j] == cost[j * n + i]));
        Ok(Self { n, cost, symmetric })
    }

    pub fn from_rows(rows: Vec<Vec<Cost>>) -> Result<Self, InstanceError> {
        let n = rows.len();
        if let Some(i) = rows.iter().position(|r| r.len() != n) {
            return Err(InstanceError::InvalidCosts(format!(
                "row {i} has {} entries, expected {n}",
                rows[i].len()
            )));
        }
        Self::from_flat(n, rows.into_iter().flatten().collect())
    }

    #[inline]
    pub fn n(&self) -> usize {
        self.n
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> Cost {
        self.cost[i * self.n + j]
    }

    pub fn is_symmetric(&self) -> bool {
        self.symmetric
    }

    /// Transposed copy; equal to `self` on symmetric matrices.
    pub fn transposed(&self) -> Self {
        let n = self.n;
        let cost = (0..n * n).map(|k| self.cost[(k % n) * n + k / n]).collect();
        Self {
            n,
            cost,
            symmetric: self.symmetric,
        }
    }
}

/// TSPLIB `EUC_2D` costs: Euclidean distance rounded to the nearest integer,
/// halves rounded up.
pub fn euc2d_costs(coords: &NodeCoords) -> CostMatrix {
    let pts = coords.points();
    let n = pts.len();
    let mut cost = vec![0; n * n];
    for i in 0..n {
        for j in i + 1..n {
            let (dx, dy) = (pts[i].0 - pts[j].0, pts[i].1 - pts[j].1);
            let d = ((dx * dx + dy * dy).sqrt() + 0.5).floor() as Cost;
            cost[i * n + j] = d;
            cost[j * n + i] = d;
        }
    }
    CostMatrix {
        n,
        cost,
        symmetric: true,
    }
}

/// A GTSP instance: a complete cost matrix plus a partition of the nodes
/// into `p ≥ 2` clusters.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GtspInstance {
    pub name: String,
    costs: CostMatrix,
    clusters: Vec<Vec<usize>>,
    cluster_of: Vec<usize>,
    coords: Option<NodeCoords>,
}

impl GtspInstance {
    /// Validates that `clusters` partitions `0..n` and builds the reverse map.
    /// Members of each cluster are stored in ascending order.
    pub fn new(
        name: impl Into<String>,
        costs: CostMatrix,
        clusters: Vec<Vec<usize>>,
    ) -> Result<Self, InstanceError> {
        let n = costs.n();
        if clusters.len() < 2 {
            return Err(InstanceError::InvalidArgument(format!(
                "need at least 2 clusters, got {}",
                clusters.len()
            )));
        }
        let mut seen = vec![0usize; n];
        let mut cluster_of = vec![usize::MAX; n];
        let mut clusters = clusters;
        for (k, members) in clusters.iter_mut().enumerate() {
            if members.is_empty() {
                return Err(InstanceError::EmptyCluster(k));
            }
            members.sort_unstable();
            for &v in members.iter() {
                if v >= n {
                    return Err(InstanceError::InvalidArgument(format!(
                        "cluster {k} references node {v} but n = {n}"
                    )));
                }
                seen[v] += 1;
                cluster_of[v] = k;
            }
        }
        if let Some(node) = seen.iter().position(|&c| c != 1) {
            return Err(InstanceError::NotPartition {
                node,
                count: seen[node],
            });
        }
        Ok(Self {
            name: name.into(),
            costs,
            clusters,
            cluster_of,
            coords: None,
        })
    }

    /// Attaches the coordinates the costs were derived from, used when the
    /// instance is written back out.
    pub fn with_coords(mut self, coords: NodeCoords) -> Self {
        debug_assert_eq!(coords.len(), self.n());
        self.coords = Some(coords);
        self
    }

    #[inline]
    pub fn n(&self) -> usize {
        self.costs.n()
    }

    /// Number of clusters `p`.
    #[inline]
    pub fn p(&self) -> usize {
        self.clusters.len()
    }

    #[inline]
    pub fn cost(&self, i: usize, j: usize) -> Cost {
        self.costs.get(i, j)
    }

    pub fn costs(&self) -> &CostMatrix {
        &self.costs
    }

    pub fn clusters(&self) -> &[Vec<usize>] {
        &self.clusters
    }

    pub fn cluster(&self, k: usize) -> &[usize] {
        &self.clusters[k]
    }

    #[inline]
    pub fn cluster_of(&self, v: usize) -> usize {
        self.cluster_of[v]
    }

    pub fn coords(&self) -> Option<&NodeCoords> {
        self.coords.as_ref()
    }

    pub fn is_symmetric(&self) -> bool {
        self.costs.is_symmetric()
    }

    /// Smallest cluster, lowest index on ties.
    pub fn min_cardinality_cluster(&self) -> usize {
        (0..self.p())
            .min_by_key(|&k| (self.clusters[k].len(), k))
            .expect("p >= 2")
    }

    /// Same partition with the cost matrix transposed.
    pub fn transposed(&self) -> Self {
        Self {
            costs: self.costs.transposed(),
            ..self.clone()
        }
    }
}

/// Selects `m` mutually far centers with the greedy farthest-point rule and
/// returns them in selection order.
///
/// The first center is the lowest node id attaining the maximum pairwise
/// cost; each later center maximizes its minimum cost to the chosen centers.
/// Ties go to the lowest node id.
pub fn farthest_centers(costs: &CostMatrix, m: usize) -> Vec<usize> {
    let n = costs.n();
    let mut max_cost = 0;
    let mut first = 0;
    // scanning i ascending, strict improvement keeps the lowest id
    for i in 0..n {
        let row_max = (0..n).map(|j| costs.get(i, j).max(costs.get(j, i))).max().unwrap_or(0);
        if row_max > max_cost {
            max_cost = row_max;
            first = i;
        }
    }
    let mut centers = vec![first];
    let mut is_center = vec![false; n];
    is_center[first] = true;
    let mut min_to_centers: Vec<Cost> = (0..n).map(|v| costs.get(first, v)).collect();
    while centers.len() < m {
        let next = (0..n)
            .filter(|&v| !is_center[v])
            .max_by_key(|&v| (min_to_centers[v], std::cmp::Reverse(v)))
            .expect("m <= n");
        centers.push(next);
        is_center[next] = true;
        for (v, d) in min_to_centers.iter_mut().enumerate() {
            *d = (*d).min(costs.get(next, v));
        }
    }
    centers
}

/// Default cluster count `⌈n/5⌉`.
pub fn default_cluster_count(n: usize) -> usize {
    n.div_ceil(5)
}

/// Partitions the nodes around `m` farthest centers (default `⌈n/5⌉`).
/// Cluster `k` is the one built around the `k`-th selected center; every
/// other node joins its nearest center, lowest center index on ties.
pub fn cluster_instance(
    coords: &NodeCoords,
    costs: &CostMatrix,
    m: Option<usize>,
) -> Result<GtspInstance, InstanceError> {
    let n = costs.n();
    if coords.len() != n {
        return Err(InstanceError::InvalidArgument(format!(
            "{} coordinates but {n} cost rows",
            coords.len()
        )));
    }
    let m = m.unwrap_or_else(|| default_cluster_count(n));
    if m < 2 || m > n {
        return Err(InstanceError::InvalidArgument(format!(
            "cluster count must be in 2..={n}, got {m}"
        )));
    }
    let centers = farthest_centers(costs, m);
    let mut clusters: Vec<Vec<usize>> = vec![Vec::new(); m];
    for v in 0..n {
        let k = match centers.iter().position(|&c| c == v) {
            Some(k) => k,
            None => (0..m)
                .min_by_key(|&k| (costs.get(centers[k], v), k))
                .expect("m >= 2"),
        };
        clusters[k].push(v);
    }
    let name = if coords.name.is_empty() {
        format!("{m}RAND{n}")
    } else {
        format!("{m}{}", coords.name.to_uppercase())
    };
    Ok(GtspInstance::new(name, costs.clone(), clusters)?.with_coords(coords.clone()))
}

/// Parts of the `<nc><NAME><n>` naming convention, e.g. `11EIL51`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct InstanceName {
    pub clusters: usize,
    pub base: String,
    pub nodes: usize,
}

impl InstanceName {
    pub fn parse(name: &str) -> Option<Self> {
        let lead = name.bytes().take_while(u8::is_ascii_digit).count();
        let trail = name.bytes().rev().take_while(u8::is_ascii_digit).count();
        if lead == 0 || trail == 0 || lead + trail >= name.len() {
            return None;
        }
        Some(Self {
            clusters: name[..lead].parse().ok()?,
            base: name[lead..name.len() - trail].to_string(),
            nodes: name[name.len() - trail..].parse().ok()?,
        })
    }
}

// ---------------------------------------------------------------------------
// TSPLIB reading and writing
// ---------------------------------------------------------------------------

#[derive(Debug, Default)]
struct TsplibDoc {
    name: String,
    dimension: Option<(usize, usize)>,
    weight_type: Option<(String, usize)>,
    weight_format: Option<String>,
    coords: Option<Vec<(f64, f64)>>,
    matrix: Option<Vec<Cost>>,
    set_count: Option<(usize, usize)>,
    sets: Option<(usize, Vec<Vec<usize>>)>,
    last_line: usize,
}

impl TsplibDoc {
    fn dimension(&self) -> Result<usize, InstanceError> {
        self.dimension
            .map(|(d, _)| d)
            .ok_or_else(|| parse_err(self.last_line, "missing DIMENSION record"))
    }
}

fn split_record(line: &str) -> (&str, Option<&str>) {
    match line.split_once(':') {
        Some((k, v)) => (k.trim(), Some(v.trim())),
        None => (line.trim(), None),
    }
}

fn is_keyword(line: &str) -> bool {
    line.trim_start()
        .chars()
        .next()
        .is_some_and(|c| c.is_ascii_alphabetic())
}

fn parse_doc(text: &str) -> Result<TsplibDoc, InstanceError> {
    let mut doc = TsplibDoc::default();
    let lines: Vec<(usize, &str)> = text
        .lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l))
        .filter(|(_, l)| !l.trim().is_empty())
        .collect();
    doc.last_line = text.lines().count().max(1);
    let mut idx = 0;
    while idx < lines.len() {
        let (lineno, line) = lines[idx];
        idx += 1;
        let (key, value) = split_record(line);
        let value_or_err = || value.ok_or_else(|| parse_err(lineno, format!("{key} needs a value")));
        match key {
            "NAME" => doc.name = value_or_err()?.to_string(),
            "TYPE" | "COMMENT" | "DISPLAY_DATA_TYPE" | "NODE_COORD_TYPE" => {}
            "DIMENSION" => {
                let d = value_or_err()?
                    .parse()
                    .map_err(|_| parse_err(lineno, "DIMENSION is not an integer"))?;
                doc.dimension = Some((d, lineno));
            }
            "EDGE_WEIGHT_TYPE" => doc.weight_type = Some((value_or_err()?.to_string(), lineno)),
            "EDGE_WEIGHT_FORMAT" => doc.weight_format = Some(value_or_err()?.to_string()),
            "GTSP_SETS" => {
                let p = value_or_err()?
                    .parse()
                    .map_err(|_| parse_err(lineno, "GTSP_SETS is not an integer"))?;
                doc.set_count = Some((p, lineno));
            }
            "NODE_COORD_SECTION" => {
                let dim = doc.dimension()?;
                let mut points: Vec<Option<(f64, f64)>> = vec![None; dim];
                let mut found = 0;
                while idx < lines.len() && !is_keyword(lines[idx].1) {
                    let (ln, l) = lines[idx];
                    idx += 1;
                    let fields: Vec<&str> = l.split_whitespace().collect();
                    if fields.len() != 3 {
                        return Err(parse_err(ln, "expected `id x y`"));
                    }
                    let id: usize = fields[0]
                        .parse()
                        .map_err(|_| parse_err(ln, "node id is not an integer"))?;
                    if id == 0 || id > dim {
                        return Err(parse_err(
                            ln,
                            format!("dimension mismatch: node id {id} outside 1..={dim}"),
                        ));
                    }
                    let parse_f = |s: &str| {
                        s.parse::<f64>()
                            .ok()
                            .filter(|x| x.is_finite())
                            .ok_or_else(|| parse_err(ln, format!("bad coordinate `{s}`")))
                    };
                    let p = (parse_f(fields[1])?, parse_f(fields[2])?);
                    if points[id - 1].replace(p).is_some() {
                        return Err(parse_err(ln, format!("duplicate node record {id}")));
                    }
                    found += 1;
                }
                if found != dim {
                    let ln = doc.dimension.map(|(_, l)| l).unwrap_or(lineno);
                    return Err(parse_err(
                        ln,
                        format!("dimension mismatch: DIMENSION is {dim} but {found} node records found"),
                    ));
                }
                doc.coords = Some(points.into_iter().map(|p| p.expect("all found")).collect());
            }
            "EDGE_WEIGHT_SECTION" => {
                let dim = doc.dimension()?;
                let mut values = Vec::with_capacity(dim * dim);
                while idx < lines.len() && !is_keyword(lines[idx].1) {
                    let (ln, l) = lines[idx];
                    idx += 1;
                    for tok in l.split_whitespace() {
                        let c: Cost = tok
                            .parse()
                            .map_err(|_| parse_err(ln, format!("bad edge weight `{tok}`")))?;
                        values.push(c);
                    }
                }
                if values.len() != dim * dim {
                    return Err(parse_err(
                        lineno,
                        format!(
                            "dimension mismatch: FULL_MATRIX needs {} weights, found {}",
                            dim * dim,
                            values.len()
                        ),
                    ));
                }
                doc.matrix = Some(values);
            }
            "GTSP_SET_SECTION" => {
                let (p, _) = doc
                    .set_count
                    .ok_or_else(|| parse_err(lineno, "GTSP_SET_SECTION before GTSP_SETS"))?;
                let mut sets: Vec<Option<Vec<usize>>> = vec![None; p];
                let mut current: Option<(usize, usize, Vec<usize>)> = None;
                while idx < lines.len() && !is_keyword(lines[idx].1) {
                    let (ln, l) = lines[idx];
                    idx += 1;
                    for tok in l.split_whitespace() {
                        let v: i64 = tok
                            .parse()
                            .map_err(|_| parse_err(ln, format!("bad set entry `{tok}`")))?;
                        match current.as_mut() {
                            None => {
                                if v < 1 || v as usize > p {
                                    return Err(parse_err(
                                        ln,
                                        format!("set id {v} outside 1..={p}"),
                                    ));
                                }
                                current = Some((v as usize, ln, Vec::new()));
                            }
                            Some((k, start, members)) => {
                                if v == -1 {
                                    if members.is_empty() {
                                        return Err(parse_err(*start, format!("empty cluster {k}")));
                                    }
                                    if sets[*k - 1].is_some() {
                                        return Err(parse_err(*start, format!("duplicate set id {k}")));
                                    }
                                    sets[*k - 1] = Some(std::mem::take(members));
                                    current = None;
                                } else if v < 1 {
                                    return Err(parse_err(ln, format!("bad node id {v}")));
                                } else {
                                    members.push(v as usize - 1);
                                }
                            }
                        }
                    }
                }
                if let Some((k, start, _)) = current {
                    return Err(parse_err(start, format!("set {k} is not terminated by -1")));
                }
                let mut out = Vec::with_capacity(p);
                for (k, s) in sets.into_iter().enumerate() {
                    out.push(s.ok_or_else(|| {
                        parse_err(lineno, format!("GTSP_SETS is {p} but set {} is missing", k + 1))
                    })?);
                }
                doc.sets = Some((lineno, out));
            }
            "EOF" => break,
            _ => return Err(parse_err(lineno, format!("unrecognized record `{key}`"))),
        }
    }
    Ok(doc)
}

/// Parses a TSPLIB `EUC_2D` file into node coordinates. File node ids are
/// 1-based; the returned points are indexed from 0.
pub fn parse_tsplib(text: &str) -> Result<NodeCoords, InstanceError> {
    let doc = parse_doc(text)?;
    let dim = doc.dimension()?;
    match &doc.weight_type {
        Some((t, _)) if t == "EUC_2D" => {}
        Some((t, ln)) => {
            return Err(parse_err(*ln, format!("unsupported EDGE_WEIGHT_TYPE {t}")));
        }
        None => return Err(parse_err(doc.last_line, "missing EDGE_WEIGHT_TYPE record")),
    }
    let points = doc
        .coords
        .ok_or_else(|| parse_err(doc.last_line, "missing NODE_COORD_SECTION"))?;
    debug_assert_eq!(points.len(), dim);
    NodeCoords::new(doc.name, points)
}

/// Parses a clustered instance: a TSPLIB body (`EUC_2D` coordinates or an
/// `EXPLICIT` `FULL_MATRIX`) plus `GTSP_SETS` and `GTSP_SET_SECTION`.
pub fn parse_clustered(text: &str) -> Result<GtspInstance, InstanceError> {
    let doc = parse_doc(text)?;
    let dim = doc.dimension()?;
    let (wtype, wline) = doc
        .weight_type
        .clone()
        .ok_or_else(|| parse_err(doc.last_line, "missing EDGE_WEIGHT_TYPE record"))?;
    let (costs, coords) = match wtype.as_str() {
        "EUC_2D" => {
            let pts = doc
                .coords
                .clone()
                .ok_or_else(|| parse_err(doc.last_line, "missing NODE_COORD_SECTION"))?;
            let coords = NodeCoords::new(doc.name.clone(), pts)?;
            (euc2d_costs(&coords), Some(coords))
        }
        "EXPLICIT" => {
            match doc.weight_format.as_deref() {
                Some("FULL_MATRIX") => {}
                other => {
                    return Err(parse_err(
                        wline,
                        format!("unsupported EDGE_WEIGHT_FORMAT {}", other.unwrap_or("(none)")),
                    ))
                }
            }
            let m = doc
                .matrix
                .clone()
                .ok_or_else(|| parse_err(doc.last_line, "missing EDGE_WEIGHT_SECTION"))?;
            (CostMatrix::from_flat(dim, m)?, None)
        }
        t => return Err(parse_err(wline, format!("unsupported EDGE_WEIGHT_TYPE {t}"))),
    };
    let (_, sets) = doc
        .sets
        .ok_or_else(|| parse_err(doc.last_line, "missing GTSP_SET_SECTION"))?;
    if let Some(node) = sets.iter().flatten().find(|&&v| v >= dim) {
        return Err(InstanceError::InvalidArgument(format!(
            "set member {} exceeds DIMENSION {dim}",
            node + 1
        )));
    }
    let instance = GtspInstance::new(doc.name, costs, sets)?;
    Ok(match coords {
        Some(c) => instance.with_coords(c),
        None => instance,
    })
}

/// Reads only the `GTSP_SETS` / `GTSP_SET_SECTION` records of a clustered
/// file, returning 0-based cluster member lists.
pub fn parse_partition(text: &str) -> Result<Vec<Vec<usize>>, InstanceError> {
    let doc = parse_doc(text)?;
    doc.sets
        .map(|(_, sets)| sets)
        .ok_or_else(|| parse_err(doc.last_line, "missing GTSP_SET_SECTION"))
}

/// Writes the clustered-instance format read by [`parse_clustered`].
/// Instances with coordinates are written as `EUC_2D`, others as an explicit
/// full matrix.
pub fn write_clustered(instance: &GtspInstance) -> String {
    let mut out = String::new();
    let n = instance.n();
    writeln!(out, "NAME : {}", instance.name).unwrap();
    writeln!(out, "TYPE : GTSP").unwrap();
    writeln!(out, "DIMENSION : {n}").unwrap();
    match instance.coords() {
        Some(coords) => {
            writeln!(out, "EDGE_WEIGHT_TYPE : EUC_2D").unwrap();
            writeln!(out, "NODE_COORD_SECTION").unwrap();
            for (i, (x, y)) in coords.points().iter().enumerate() {
                writeln!(out, "{} {x} {y}", i + 1).unwrap();
            }
        }
        None => {
            writeln!(out, "EDGE_WEIGHT_TYPE : EXPLICIT").unwrap();
            writeln!(out, "EDGE_WEIGHT_FORMAT : FULL_MATRIX").unwrap();
            writeln!(out, "EDGE_WEIGHT_SECTION").unwrap();
            for i in 0..n {
                let row: Vec<String> = (0..n).map(|j| instance.cost(i, j).to_string()).collect();
                writeln!(out, "{}", row.join(" ")).unwrap();
            }
        }
    }
    writeln!(out, "GTSP_SETS : {}", instance.p()).unwrap();
    writeln!(out, "GTSP_SET_SECTION").unwrap();
    for (k, members) in instance.clusters().iter().enumerate() {
        write!(out, "{}", k + 1).unwrap();
        for v in members {
            write!(out, " {}", v + 1).unwrap();
        }
        writeln!(out, " -1").unwrap();
    }
    writeln!(out, "EOF").unwrap();
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn coords(pts: &[(f64, f64)]) -> NodeCoords {
        NodeCoords::new("t", pts.to_vec()).unwrap()
    }

    const SMALL: &str = "NAME : tiny\nTYPE : TSP\nDIMENSION : 3\nEDGE_WEIGHT_TYPE : EUC_2D\nNODE_COORD_SECTION\n1 0 0\n2 3 4\n3 6 8\nEOF\n";

    #[test]
    fn parses_minimal_file_in_order() {
        let c = parse_tsplib(SMALL).unwrap();
        assert_eq!(c.name, "tiny");
        assert_eq!(c.points(), &[(0.0, 0.0), (3.0, 4.0), (6.0, 8.0)]);
    }

    #[test]
    fn node_records_may_be_out_of_order() {
        let text = SMALL.replace("1 0 0\n2 3 4\n", "2 3 4\n1 0 0\n");
        assert_eq!(parse_tsplib(&text).unwrap(), parse_tsplib(SMALL).unwrap());
    }

    #[test]
    fn short_coordinate_section_is_dimension_mismatch() {
        let mut text = String::from("NAME: x\nDIMENSION: 51\nEDGE_WEIGHT_TYPE: EUC_2D\nNODE_COORD_SECTION\n");
        for i in 1..=50 {
            text.push_str(&format!("{i} {i} {}\n", 2 * i));
        }
        let err = parse_tsplib(&text).unwrap_err();
        assert!(err.to_string().contains("dimension mismatch"), "{err}");
        assert!(matches!(err, InstanceError::Parse { line: 2, .. }));
    }

    #[test]
    fn duplicate_node_record_names_line() {
        let text = SMALL.replace("3 6 8", "2 6 8");
        let err = parse_tsplib(&text).unwrap_err();
        assert_eq!(
            err,
            InstanceError::Parse {
                line: 8,
                msg: "duplicate node record 2".into()
            }
        );
    }

    #[test]
    fn unsupported_weight_type() {
        let text = SMALL.replace("EUC_2D", "GEO");
        let err = parse_tsplib(&text).unwrap_err();
        assert!(matches!(err, InstanceError::Parse { line: 4, .. }), "{err}");
        assert!(err.to_string().contains("unsupported EDGE_WEIGHT_TYPE"));
    }

    #[test]
    fn euc2d_rounding() {
        let c = euc2d_costs(&coords(&[(0.0, 0.0), (3.0, 4.0), (1.0, 1.0), (1.0, 2.0)]));
        assert_eq!(c.get(0, 1), 5);
        assert_eq!(c.get(0, 2), 1);
        assert_eq!(c.get(0, 3), 2);
        // exact half rounds up: (0,0)-(0.5,0) is 0.5
        let h = euc2d_costs(&coords(&[(0.0, 0.0), (0.5, 0.0)]));
        assert_eq!(h.get(0, 1), 1);
        assert!(c.is_symmetric());
        assert!((0..4).all(|i| c.get(i, i) == 0));
    }

    #[test]
    fn collinear_clustering() {
        let c = coords(&[(0.0, 0.0), (1.0, 0.0), (9.0, 0.0), (10.0, 0.0)]);
        let costs = euc2d_costs(&c);
        assert_eq!(farthest_centers(&costs, 2), vec![0, 3]);
        let inst = cluster_instance(&c, &costs, Some(2)).unwrap();
        assert_eq!(inst.clusters(), &[vec![0, 1], vec![2, 3]]);
        assert_eq!(inst.name, "2T");
    }

    #[test]
    fn m_equal_n_gives_singletons() {
        let c = coords(&[(0.0, 0.0), (5.0, 1.0), (2.0, 7.0), (4.0, 4.0)]);
        let inst = cluster_instance(&c, &euc2d_costs(&c), Some(4)).unwrap();
        assert!(inst.clusters().iter().all(|k| k.len() == 1));
    }

    #[test]
    fn cluster_count_bounds() {
        let c = coords(&[(0.0, 0.0), (5.0, 1.0), (2.0, 7.0)]);
        let costs = euc2d_costs(&c);
        assert!(matches!(
            cluster_instance(&c, &costs, Some(4)),
            Err(InstanceError::InvalidArgument(_))
        ));
        assert!(matches!(
            cluster_instance(&c, &costs, Some(1)),
            Err(InstanceError::InvalidArgument(_))
        ));
    }

    #[test]
    fn default_count_is_ceiling() {
        assert_eq!(default_cluster_count(51), 11);
        assert_eq!(default_cluster_count(50), 10);
    }

    const CLUSTERED: &str = "NAME : four\nTYPE : GTSP\nDIMENSION : 4\nEDGE_WEIGHT_TYPE : EXPLICIT\nEDGE_WEIGHT_FORMAT : FULL_MATRIX\nEDGE_WEIGHT_SECTION\n0 1 2 3\n1 0 4 5\n2 4 0 6\n3 5 6 0\nGTSP_SETS : 2\nGTSP_SET_SECTION\n1 1 2 -1\n2 3 4 -1\nEOF\n";

    #[test]
    fn clustered_index_shift() {
        let inst = parse_clustered(CLUSTERED).unwrap();
        assert_eq!(inst.clusters(), &[vec![0, 1], vec![2, 3]]);
        assert_eq!(inst.cost(2, 3), 6);
        assert!(inst.is_symmetric());
        assert_eq!(inst.cluster_of(3), 1);
    }

    #[test]
    fn clustered_node_in_two_sets() {
        let text = CLUSTERED.replace("2 3 4 -1", "2 3 4 3 -1");
        assert_eq!(
            parse_clustered(&text).unwrap_err(),
            InstanceError::NotPartition { node: 2, count: 2 }
        );
        assert!(parse_clustered(&text).unwrap_err().to_string().contains("not a partition"));
    }

    #[test]
    fn clustered_node_in_no_set() {
        let text = CLUSTERED.replace("2 3 4 -1", "2 3 -1");
        assert_eq!(
            parse_clustered(&text).unwrap_err(),
            InstanceError::NotPartition { node: 3, count: 0 }
        );
    }

    #[test]
    fn clustered_empty_set() {
        let text = CLUSTERED.replace("2 3 4 -1", "2 -1");
        let err = parse_clustered(&text).unwrap_err();
        assert!(err.to_string().contains("empty cluster"), "{err}");
    }

    #[test]
    fn write_then_parse_round_trips() {
        let inst = parse_clustered(CLUSTERED).unwrap();
        assert_eq!(parse_clustered(&write_clustered(&inst)).unwrap(), inst);

        let c = coords(&[(0.0, 0.0), (1.5, 0.0), (9.0, 2.25), (10.0, 0.0)]);
        let inst = cluster_instance(&c, &euc2d_costs(&c), Some(2)).unwrap();
        let back = parse_clustered(&write_clustered(&inst)).unwrap();
        assert_eq!(back.name, inst.name);
        assert_eq!(back.costs(), inst.costs());
        assert_eq!(back.clusters(), inst.clusters());
        assert_eq!(back.coords().unwrap().points(), c.points());
    }

    #[test]
    fn instance_name_convention() {
        assert_eq!(
            InstanceName::parse("11EIL51"),
            Some(InstanceName {
                clusters: 11,
                base: "EIL".into(),
                nodes: 51
            })
        );
        assert_eq!(InstanceName::parse("eil51"), None);
        assert_eq!(InstanceName::parse("1151"), None);
    }

    #[test]
    fn matrix_validation() {
        assert!(CostMatrix::from_rows(vec![vec![0, 1], vec![1, 1]]).is_err());
        assert!(CostMatrix::from_rows(vec![vec![0, 1], vec![1]]).is_err());
        let asym = CostMatrix::from_rows(vec![vec![0, 1], vec![2, 0]]).unwrap();
        assert!(!asym.is_symmetric());
        assert_eq!(asym.transposed().get(0, 1), 2);
    }

    #[test]
    fn partition_requires_two_clusters() {
        let m = CostMatrix::from_rows(vec![vec![0, 1], vec![1, 0]]).unwrap();
        assert!(GtspInstance::new("x", m, vec![vec![0, 1]]).is_err());
    }
}
