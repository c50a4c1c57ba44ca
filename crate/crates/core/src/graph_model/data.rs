use std::io::BufRead;
use std::mem::size_of;

use super::{LabelId, NodeIx};
use crate::error::{Error, Result};

/// One adjacency entry. In the forward list `node` is the edge target, in
/// the inverse list it is the edge source.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Link {
    pub node: NodeIx,
    pub trust: f64,
    pub intimacy: f64,
}

/// A directed edge with its attributes, as yielded by [`DataGraph::edges`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DataEdge {
    pub from: NodeIx,
    pub to: NodeIx,
    pub trust: f64,
    pub intimacy: f64,
}

/// Compressed adjacency: `links[offsets[v]..offsets[v + 1]]` belong to `v`.
#[derive(Debug, Clone, PartialEq)]
struct Adjacency {
    offsets: Vec<u32>,
    links: Vec<Link>,
}

impl Adjacency {
    #[inline]
    fn range(&self, v: NodeIx) -> std::ops::Range<usize> {
        self.offsets[v.index()] as usize..self.offsets[v.index() + 1] as usize
    }

    #[inline]
    fn of(&self, v: NodeIx) -> &[Link] {
        &self.links[self.range(v)]
    }

    fn bytes(&self) -> usize {
        self.offsets.capacity() * size_of::<u32>() + self.links.capacity() * size_of::<Link>()
    }

    /// Builds from `(from, to, trust, intimacy)` tuples sorted by `(from, to)`.
    fn from_sorted(node_count: usize, edges: &[(u32, u32, f64, f64)]) -> Self {
        let mut offsets = vec![0u32; node_count + 1];
        for &(from, _, _, _) in edges {
            offsets[from as usize + 1] += 1;
        }
        for i in 0..node_count {
            offsets[i + 1] += offsets[i];
        }
        let links = edges
            .iter()
            .map(|&(_, to, trust, intimacy)| Link {
                node: NodeIx(to),
                trust,
                intimacy,
            })
            .collect();
        Adjacency { offsets, links }
    }
}

/// Attributed directed graph with sorted forward adjacency and an optional
/// inverse adjacency.
#[derive(Debug, Clone, PartialEq)]
pub struct DataGraph {
    ids: Vec<u64>,
    rho: Vec<f64>,
    label_offsets: Vec<u32>,
    labels: Vec<LabelId>,
    label_names: Vec<String>,
    out_adj: Adjacency,
    in_adj: Option<Adjacency>,
    attributed: bool,
}

/// Counters reported by [`load_edge_list`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct LoadReport {
    pub nodes: usize,
    pub edges: usize,
    pub duplicates: usize,
    pub self_loops: usize,
}

/// Reads a SNAP-style edge list. The result carries topology only.
pub fn load_edge_list<R: BufRead>(mut source: R) -> Result<(DataGraph, LoadReport)> {
    let mut pairs: Vec<(u64, u64)> = Vec::new();
    let mut ids: Vec<u64> = Vec::new();
    let mut report = LoadReport::default();
    let mut line = String::new();
    let mut line_no = 0usize;
    loop {
        line.clear();
        if source.read_line(&mut line)? == 0 {
            break;
        }
        line_no += 1;
        let text = line.trim();
        if text.is_empty() || text.starts_with('#') {
            continue;
        }
        let mut tokens = text.split_ascii_whitespace();
        let (Some(a), Some(b), None) = (tokens.next(), tokens.next(), tokens.next()) else {
            return Err(Error::parse(line_no, "expected two node ids"));
        };
        let from: u64 = a
            .parse()
            .map_err(|_| Error::parse(line_no, format!("bad node id {a:?}")))?;
        let to: u64 = b
            .parse()
            .map_err(|_| Error::parse(line_no, format!("bad node id {b:?}")))?;
        ids.push(from);
        ids.push(to);
        if from == to {
            report.self_loops += 1;
            continue;
        }
        pairs.push((from, to));
    }
    from_pairs(ids, &pairs, report)
}

impl DataGraph {
    /// Topology-only graph from `(from, to)` id pairs, with the same
    /// deduplication and self-loop handling as [`load_edge_list`].
    pub fn from_edge_pairs(pairs: &[(u64, u64)]) -> Result<(DataGraph, LoadReport)> {
        let mut ids: Vec<u64> = pairs.iter().flat_map(|&(a, b)| [a, b]).collect();
        ids.sort_unstable();
        ids.dedup();
        let report = LoadReport {
            self_loops: pairs.iter().filter(|(a, b)| a == b).count(),
            ..LoadReport::default()
        };
        let kept: Vec<(u64, u64)> = pairs.iter().copied().filter(|(a, b)| a != b).collect();
        from_pairs(ids, &kept, report)
    }
}

fn from_pairs(mut ids: Vec<u64>, pairs: &[(u64, u64)], mut report: LoadReport) -> Result<(DataGraph, LoadReport)> {
    ids.sort_unstable();
    ids.dedup();
    ids.shrink_to_fit();
    if ids.len() > u32::MAX as usize {
        return Err(Error::Validation("too many nodes".into()));
    }

    let dense = DenseIds::new(&ids);
    let mut edges: Vec<(u32, u32, f64, f64)> = pairs
        .iter()
        .map(|&(f, t)| (dense.get(f), dense.get(t), 0.0, 0.0))
        .collect();
    // Attributes are unset, so keeping "the first occurrence" is the same as
    // keeping any occurrence.
    edges.sort_unstable_by_key(|e| (e.0, e.1));
    let before = edges.len();
    edges.dedup_by_key(|e| (e.0, e.1));
    report.duplicates = before - edges.len();
    report.nodes = ids.len();
    report.edges = edges.len();

    let n = ids.len();
    let graph = DataGraph {
        rho: vec![0.0; n],
        label_offsets: vec![0; n + 1],
        labels: Vec::new(),
        label_names: Vec::new(),
        out_adj: Adjacency::from_sorted(n, &edges),
        in_adj: None,
        attributed: false,
        ids,
    };
    Ok((graph, report))
}

/// External id to dense index; identity when ids are exactly `0..n`.
struct DenseIds<'a> {
    ids: &'a [u64],
    identity: bool,
}

impl<'a> DenseIds<'a> {
    fn new(ids: &'a [u64]) -> Self {
        let identity = ids.last().is_none_or(|&last| last + 1 == ids.len() as u64);
        DenseIds { ids, identity }
    }

    fn get(&self, id: u64) -> u32 {
        if self.identity {
            id as u32
        } else {
            self.ids.binary_search(&id).expect("id collected") as u32
        }
    }
}

impl DataGraph {
    pub fn node_count(&self) -> usize {
        self.ids.len()
    }

    pub fn edge_count(&self) -> usize {
        self.out_adj.links.len()
    }

    pub fn is_attributed(&self) -> bool {
        self.attributed
    }

    /// External id of a dense node index.
    #[inline]
    pub fn ext_id(&self, v: NodeIx) -> u64 {
        self.ids[v.index()]
    }

    pub fn index_of(&self, ext_id: u64) -> Option<NodeIx> {
        self.ids.binary_search(&ext_id).ok().map(|i| NodeIx(i as u32))
    }

    pub fn nodes(&self) -> impl Iterator<Item = NodeIx> + '_ {
        (0..self.ids.len() as u32).map(NodeIx)
    }

    #[inline]
    pub fn rho(&self, v: NodeIx) -> f64 {
        self.rho[v.index()]
    }

    #[inline]
    pub fn labels(&self, v: NodeIx) -> &[LabelId] {
        let i = v.index();
        &self.labels[self.label_offsets[i] as usize..self.label_offsets[i + 1] as usize]
    }

    pub fn label_id(&self, name: &str) -> Option<LabelId> {
        self.label_names
            .iter()
            .position(|n| n == name)
            .map(|i| LabelId(i as u32))
    }

    pub fn label_name(&self, label: LabelId) -> &str {
        &self.label_names[label.0 as usize]
    }

    /// Outgoing links of `v`, ascending by target.
    #[inline]
    pub fn out_links(&self, v: NodeIx) -> &[Link] {
        self.out_adj.of(v)
    }

    /// Incoming links of `v`, ascending by source, when the inverse list exists.
    #[inline]
    pub fn in_links(&self, v: NodeIx) -> Option<&[Link]> {
        self.in_adj.as_ref().map(|adj| adj.of(v))
    }

    pub fn has_inverse(&self) -> bool {
        self.in_adj.is_some()
    }

    pub fn edge(&self, from: NodeIx, to: NodeIx) -> Option<&Link> {
        let links = self.out_links(from);
        links
            .binary_search_by_key(&to, |l| l.node)
            .ok()
            .map(|i| &links[i])
    }

    /// All edges in forward adjacency order.
    pub fn edges(&self) -> impl Iterator<Item = DataEdge> + '_ {
        self.nodes().flat_map(move |from| {
            self.out_links(from).iter().map(move |l| DataEdge {
                from,
                to: l.node,
                trust: l.trust,
                intimacy: l.intimacy,
            })
        })
    }

    /// Materialises the inverse adjacency as the exact transpose.
    pub fn build_inverse_adjacency(&mut self) {
        let n = self.node_count();
        let mut offsets = vec![0u32; n + 1];
        for l in &self.out_adj.links {
            offsets[l.node.index() + 1] += 1;
        }
        for i in 0..n {
            offsets[i + 1] += offsets[i];
        }
        let mut cursor: Vec<u32> = offsets[..n].to_vec();
        let filler = Link {
            node: NodeIx(0),
            trust: 0.0,
            intimacy: 0.0,
        };
        let mut links = vec![filler; self.out_adj.links.len()];
        // Sources are visited in ascending order, so each inverse list comes
        // out sorted.
        for from in 0..n {
            let from_ix = NodeIx(from as u32);
            for l in self.out_adj.of(from_ix) {
                let slot = &mut cursor[l.node.index()];
                links[*slot as usize] = Link {
                    node: from_ix,
                    trust: l.trust,
                    intimacy: l.intimacy,
                };
                *slot += 1;
            }
        }
        self.in_adj = Some(Adjacency { offsets, links });
    }

    pub fn drop_inverse_adjacency(&mut self) {
        self.in_adj = None;
    }

    /// Bytes held by the graph's own buffers (capacity based).
    pub fn accounted_bytes(&self) -> usize {
        let names: usize = self
            .label_names
            .iter()
            .map(|s| s.capacity() + size_of::<String>())
            .sum();
        self.ids.capacity() * size_of::<u64>()
            + self.rho.capacity() * size_of::<f64>()
            + self.label_offsets.capacity() * size_of::<u32>()
            + self.labels.capacity() * size_of::<LabelId>()
            + names
            + self.out_adj.bytes()
            + self.in_adj.as_ref().map_or(0, Adjacency::bytes)
    }

    pub(crate) fn intern_label(&mut self, name: &str) -> LabelId {
        match self.label_id(name) {
            Some(id) => id,
            None => {
                self.label_names.push(name.to_string());
                LabelId(self.label_names.len() as u32 - 1)
            }
        }
    }

    /// Replaces every attribute. `labels[v]` and `rho[v]` are indexed by
    /// dense node, `edge_attrs` follows forward adjacency order.
    pub(crate) fn set_attributes(
        &mut self,
        rho: Vec<f64>,
        node_labels: Vec<Vec<LabelId>>,
        edge_attrs: Vec<(f64, f64)>,
    ) {
        debug_assert_eq!(rho.len(), self.node_count());
        debug_assert_eq!(edge_attrs.len(), self.edge_count());
        self.rho = rho;
        let mut offsets = Vec::with_capacity(node_labels.len() + 1);
        let mut flat = Vec::with_capacity(node_labels.len());
        offsets.push(0u32);
        for mut set in node_labels {
            set.sort_unstable();
            set.dedup();
            flat.extend(set);
            offsets.push(flat.len() as u32);
        }
        self.label_offsets = offsets;
        self.labels = flat;
        for (link, (trust, intimacy)) in self.out_adj.links.iter_mut().zip(edge_attrs) {
            link.trust = trust;
            link.intimacy = intimacy;
        }
        self.attributed = true;
        if self.in_adj.is_some() {
            self.build_inverse_adjacency();
        }
    }

    pub(crate) fn link_index(&self, from: NodeIx, to: NodeIx) -> Option<usize> {
        let range = self.out_adj.range(from);
        let start = range.start;
        self.out_adj.links[range]
            .binary_search_by_key(&to, |l| l.node)
            .ok()
            .map(|i| start + i)
    }
}

/// Builds a fully attributed graph directly, mostly for fixtures and tests.
#[derive(Debug, Default, Clone)]
pub struct GraphBuilder {
    nodes: Vec<(u64, Vec<String>, f64)>,
    edges: Vec<(u64, u64, f64, f64)>,
}

impl GraphBuilder {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn node(&mut self, id: u64, labels: &[&str], rho: f64) -> &mut Self {
        self.nodes
            .push((id, labels.iter().map(|s| s.to_string()).collect(), rho));
        self
    }

    pub fn edge(&mut self, from: u64, to: u64, trust: f64, intimacy: f64) -> &mut Self {
        self.edges.push((from, to, trust, intimacy));
        self
    }

    pub fn build(&self) -> Result<DataGraph> {
        let mut ids: Vec<u64> = self.nodes.iter().map(|n| n.0).collect();
        ids.sort_unstable();
        if ids.windows(2).any(|w| w[0] == w[1]) {
            return Err(Error::Validation("duplicate node id".into()));
        }
        let n = ids.len();
        let index = |id: u64| {
            ids.binary_search(&id)
                .map(|i| i as u32)
                .map_err(|_| Error::Validation(format!("edge endpoint {id} is not a node")))
        };
        let mut edges = Vec::with_capacity(self.edges.len());
        for &(f, t, trust, intimacy) in &self.edges {
            if f == t {
                return Err(Error::Validation(format!("self-loop on {f}")));
            }
            check_unit(trust, || format!("trust of edge ({f}, {t})"))?;
            check_unit(intimacy, || format!("intimacy of edge ({f}, {t})"))?;
            edges.push((index(f)?, index(t)?, trust, intimacy));
        }
        edges.sort_by_key(|e| (e.0, e.1));
        if edges.windows(2).any(|w| (w[0].0, w[0].1) == (w[1].0, w[1].1)) {
            return Err(Error::Validation("duplicate edge".into()));
        }

        let slots: Vec<u32> = self
            .nodes
            .iter()
            .map(|n| index(n.0))
            .collect::<Result<_>>()?;
        let mut graph = DataGraph {
            rho: vec![0.0; n],
            label_offsets: vec![0; n + 1],
            labels: Vec::new(),
            label_names: Vec::new(),
            out_adj: Adjacency::from_sorted(n, &edges),
            in_adj: None,
            attributed: false,
            ids,
        };
        let mut rho = vec![0.0; n];
        let mut labels = vec![Vec::new(); n];
        for ((id, names, r), &v) in self.nodes.iter().zip(&slots) {
            check_unit(*r, || format!("rho of node {id}"))?;
            let v = v as usize;
            rho[v] = *r;
            labels[v] = names.iter().map(|s| graph.intern_label(s)).collect();
        }
        let attrs = edges.iter().map(|e| (e.2, e.3)).collect();
        graph.set_attributes(rho, labels, attrs);
        Ok(graph)
    }
}

pub(crate) fn check_unit(value: f64, what: impl FnOnce() -> String) -> Result<()> {
    if (0.0..=1.0).contains(&value) {
        Ok(())
    } else {
        Err(Error::Validation(format!("{} {value} outside [0, 1]", what())))
    }
}
