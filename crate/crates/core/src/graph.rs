//! Script/file dependency graph implied by the reads and writes in code.

use std::collections::{BTreeMap, BTreeSet, VecDeque};

use serde::{Deserialize, Serialize};

use crate::paths::Normalized;
use crate::scanner::{Io, ScriptFacts};

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum NodeKind {
    Script,
    File,
}

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Node {
    pub path: String,
    pub kind: NodeKind,
}

/// `script → file` for writes, `file → script` for reads.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Edge {
    pub from: String,
    pub to: String,
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct BuildGraph {
    pub nodes: Vec<Node>,
    pub edges: Vec<Edge>,
}

pub fn build_graph(facts: &[ScriptFacts]) -> BuildGraph {
    let scripts: BTreeSet<&str> = facts.iter().map(|f| f.script.as_str()).collect();
    let mut files = BTreeSet::new();
    let mut edges = BTreeSet::new();

    for f in facts {
        for r in &f.path_refs {
            let Some(Normalized::Inside(target)) = r.target(&f.base_dir) else {
                continue;
            };
            // sourcing another script is not a data dependency
            if target == "." || scripts.contains(target.as_str()) {
                continue;
            }
            let edge = match r.io {
                Io::Write => Edge {
                    from: f.script.clone(),
                    to: target.clone(),
                },
                Io::Read | Io::Unknown => Edge {
                    from: target.clone(),
                    to: f.script.clone(),
                },
            };
            files.insert(target);
            edges.insert(edge);
        }
    }

    let mut nodes: Vec<Node> = scripts
        .iter()
        .map(|s| Node {
            path: s.to_string(),
            kind: NodeKind::Script,
        })
        .chain(files.into_iter().map(|path| Node {
            path,
            kind: NodeKind::File,
        }))
        .collect();
    nodes.sort();
    BuildGraph {
        nodes,
        edges: edges.into_iter().collect(),
    }
}

impl BuildGraph {
    pub fn scripts(&self) -> impl Iterator<Item = &str> {
        self.nodes
            .iter()
            .filter(|n| n.kind == NodeKind::Script)
            .map(|n| n.path.as_str())
    }

    /// Script-level dependencies: `a → b` when `a` writes a file `b` reads.
    pub fn script_deps(&self) -> BTreeMap<&str, BTreeSet<&str>> {
        let mut writers: BTreeMap<&str, Vec<&str>> = BTreeMap::new();
        let mut readers: BTreeMap<&str, Vec<&str>> = BTreeMap::new();
        let kinds: BTreeMap<&str, NodeKind> =
            self.nodes.iter().map(|n| (n.path.as_str(), n.kind)).collect();
        for e in &self.edges {
            if kinds.get(e.from.as_str()) == Some(&NodeKind::Script) {
                writers.entry(e.to.as_str()).or_default().push(e.from.as_str());
            } else {
                readers.entry(e.from.as_str()).or_default().push(e.to.as_str());
            }
        }
        let mut deps: BTreeMap<&str, BTreeSet<&str>> =
            self.scripts().map(|s| (s, BTreeSet::new())).collect();
        for (file, ws) in &writers {
            for r in readers.get(file).into_iter().flatten() {
                for w in ws {
                    deps.entry(w).or_default().insert(r);
                }
            }
        }
        deps
    }

    /// Scripts lying on a dependency cycle, sorted.
    pub fn cyclic_scripts(&self) -> Vec<String> {
        let deps = self.script_deps();
        deps.keys()
            .filter(|&&start| {
                let mut seen = BTreeSet::new();
                let mut queue: VecDeque<&str> = deps[start].iter().copied().collect();
                while let Some(n) = queue.pop_front() {
                    if n == start {
                        return true;
                    }
                    if seen.insert(n) {
                        queue.extend(deps.get(n).into_iter().flatten().copied());
                    }
                }
                false
            })
            .map(|s| s.to_string())
            .collect()
    }

    pub fn is_acyclic(&self) -> bool {
        self.cyclic_scripts().is_empty()
    }

    /// Kahn's algorithm over scripts. `None` on a cycle; otherwise the order
    /// and whether it was forced at every step.
    pub fn topological_order(&self) -> Option<(Vec<String>, bool)> {
        let deps = self.script_deps();
        let mut indegree: BTreeMap<&str, usize> = deps.keys().map(|&k| (k, 0)).collect();
        for targets in deps.values() {
            for t in targets {
                *indegree.get_mut(t).expect("dep target is a script") += 1;
            }
        }
        let mut ready: BTreeSet<&str> = indegree
            .iter()
            .filter(|(_, &d)| d == 0)
            .map(|(&k, _)| k)
            .collect();
        let mut order = Vec::new();
        let mut unique = true;
        while let Some(&next) = ready.iter().next() {
            if ready.len() > 1 {
                unique = false;
            }
            ready.remove(next);
            order.push(next.to_string());
            for t in &deps[next] {
                let d = indegree.get_mut(t).expect("dep target is a script");
                *d -= 1;
                if *d == 0 {
                    ready.insert(t);
                }
            }
        }
        (order.len() == deps.len()).then_some((order, unique))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::config::Config;
    use crate::scanner::scan_script;

    fn graph(scripts: &[(&str, &str)]) -> BuildGraph {
        let table = Config::builtin().functions;
        let facts: Vec<_> = scripts
            .iter()
            .map(|(p, src)| scan_script(p, src.as_bytes(), &table).unwrap())
            .collect();
        build_graph(&facts)
    }

    #[test]
    fn linear_chain() {
        let g = graph(&[
            ("a.R", "x <- read.csv('a.csv')\nsaveRDS(x, 'b.rds')\n"),
            ("b.R", "y <- readRDS('b.rds')\n"),
        ]);
        assert_eq!(g.nodes.len(), 4);
        assert_eq!(
            g.edges,
            vec![
                Edge {
                    from: "a.R".into(),
                    to: "b.rds".into()
                },
                Edge {
                    from: "a.csv".into(),
                    to: "a.R".into()
                },
                Edge {
                    from: "b.rds".into(),
                    to: "b.R".into()
                },
            ]
        );
        assert!(g.is_acyclic());
        assert_eq!(
            g.topological_order(),
            Some((vec!["a.R".to_string(), "b.R".to_string()], true))
        );
    }

    #[test]
    fn empty() {
        let g = graph(&[]);
        assert!(g.nodes.is_empty() && g.edges.is_empty());
        assert_eq!(g.topological_order(), Some((vec![], true)));
    }

    #[test]
    fn mutual_cycle() {
        let g = graph(&[
            ("a.R", "readRDS('y.rds')\nsaveRDS(1, 'x.rds')\n"),
            ("b.R", "readRDS('x.rds')\nsaveRDS(1, 'y.rds')\n"),
            ("c.R", "readRDS('x.rds')\n"),
        ]);
        assert_eq!(g.cyclic_scripts(), vec!["a.R", "b.R"]);
        assert_eq!(g.topological_order(), None);
    }

    #[test]
    fn bipartite_and_ambiguous() {
        let g = graph(&[
            ("a.R", "source('b.R')\nread.csv('d.csv')\n"),
            ("b.R", "read.csv('d.csv')\nread.csv('../out.csv')\n"),
        ]);
        let kinds: BTreeMap<_, _> = g.nodes.iter().map(|n| (n.path.clone(), n.kind)).collect();
        for e in &g.edges {
            assert_ne!(kinds[&e.from], kinds[&e.to]);
        }
        let (_, unique) = g.topological_order().unwrap();
        assert!(!unique);
    }
}
