use super::InfoStructure;

/// A minimal object together with one product factorization when it exists.
#[derive(Debug, Clone)]
pub struct MinimalObject {
    pub id: String,
    pub index: usize,
    /// Two non-terminal objects, distinct from this one, whose meet it is.
    pub factorization: Option<(String, String)>,
}

impl MinimalObject {
    pub fn irreducible(&self) -> bool {
        self.factorization.is_none()
    }
}

/// Minimal objects, their reducibility, and the components of the
/// structure with the terminal removed.
#[derive(Debug, Clone)]
pub struct MinimalAnalysis {
    pub minimal: Vec<MinimalObject>,
    /// Connected components as sorted id lists.
    pub components: Vec<Vec<String>>,
}

impl MinimalAnalysis {
    pub fn component_count(&self) -> usize {
        self.components.len()
    }
}

/// Objects with no strictly refining object.
pub fn minimal_objects(s: &InfoStructure) -> Vec<usize> {
    (0..s.len())
        .filter(|&z| !(0..s.len()).any(|x| x != z && s.leq(x, z)))
        .collect()
}

/// Connected components of the undirected comparability graph on the
/// non-terminal objects.
pub fn components(s: &InfoStructure) -> Vec<Vec<usize>> {
    let nodes = s.non_terminal();
    let mut seen = vec![false; s.len()];
    let mut out = Vec::new();
    for &start in &nodes {
        if seen[start] {
            continue;
        }
        let mut comp = Vec::new();
        let mut stack = vec![start];
        seen[start] = true;
        while let Some(i) = stack.pop() {
            comp.push(i);
            for &j in &nodes {
                if !seen[j] && (s.leq(i, j) || s.leq(j, i)) {
                    seen[j] = true;
                    stack.push(j);
                }
            }
        }
        comp.sort_unstable();
        out.push(comp);
    }
    out.sort();
    out
}

/// Finds the minimal objects and searches exhaustively for a factorization
/// of each as a meet of two other non-terminal objects.
pub fn analyze_minimal(s: &InfoStructure) -> MinimalAnalysis {
    let t = s.terminal();
    let minimal = minimal_objects(s)
        .into_iter()
        .filter(|&z| z != t)
        .map(|z| {
            let mut factorization = None;
            'search: for x in 0..s.len() {
                if x == z || x == t {
                    continue;
                }
                for y in (x + 1)..s.len() {
                    if y == z || y == t {
                        continue;
                    }
                    if matches!(s.meet(x, y), Ok(Some(m)) if m == z) {
                        factorization = Some((s.id(x).to_string(), s.id(y).to_string()));
                        break 'search;
                    }
                }
            }
            MinimalObject {
                id: s.id(z).to_string(),
                index: z,
                factorization,
            }
        })
        .collect();
    let components = components(s)
        .into_iter()
        .map(|comp| comp.into_iter().map(|i| s.id(i).to_string()).collect())
        .collect();
    MinimalAnalysis {
        minimal,
        components,
    }
}
