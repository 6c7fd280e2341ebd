//! Irreducible components of a substitution: strongly connected classes of
//! the occurrence digraph (`a → b` iff `b` occurs in `τ(a)`), their spectral
//! radii, reachability, and the set of fastest-growing letters.

use serde::Serialize;

use super::matrix::Matrix;
use super::spectral::{spectral_radius, SpectralEstimate, DEFAULT_MAX_ITERATIONS, DEFAULT_TOLERANCE};
use crate::words::Letter;

/// Strongly connected components by Tarjan's algorithm, sinks first.
pub fn strongly_connected(adjacency: &[Vec<usize>]) -> Vec<Vec<usize>> {
    struct State<'a> {
        adj: &'a [Vec<usize>],
        index: Vec<Option<usize>>,
        low: Vec<usize>,
        on_stack: Vec<bool>,
        stack: Vec<usize>,
        next: usize,
        out: Vec<Vec<usize>>,
    }

    fn visit(st: &mut State<'_>, v: usize) {
        st.index[v] = Some(st.next);
        st.low[v] = st.next;
        st.next += 1;
        st.stack.push(v);
        st.on_stack[v] = true;
        for &w in &st.adj[v] {
            match st.index[w] {
                None => {
                    visit(st, w);
                    st.low[v] = st.low[v].min(st.low[w]);
                }
                Some(iw) if st.on_stack[w] => st.low[v] = st.low[v].min(iw),
                Some(_) => {}
            }
        }
        if Some(st.low[v]) == st.index[v] {
            let mut comp = Vec::new();
            loop {
                let w = st.stack.pop().expect("tarjan stack");
                st.on_stack[w] = false;
                comp.push(w);
                if w == v {
                    break;
                }
            }
            comp.sort_unstable();
            st.out.push(comp);
        }
    }

    let n = adjacency.len();
    let mut st = State {
        adj: adjacency,
        index: vec![None; n],
        low: vec![0; n],
        on_stack: vec![false; n],
        stack: Vec::new(),
        next: 0,
        out: Vec::new(),
    };
    for v in 0..n {
        if st.index[v].is_none() {
            visit(&mut st, v);
        }
    }
    st.out
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Component {
    pub letters: Vec<Letter>,
    pub rho: SpectralEstimate<f64>,
    pub terminal: bool,
    pub maximum: bool,
    /// Indices of the components reachable from this one, itself included.
    pub reaches: Vec<usize>,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ComponentDecomposition {
    /// Ordered by smallest letter.
    pub components: Vec<Component>,
    /// `component_of[a]` indexes `components`.
    pub component_of: Vec<usize>,
    /// Letters that can reach a maximum component, ascending.
    pub maxal: Vec<Letter>,
    pub rho_max: SpectralEstimate<f64>,
}

/// Slack when comparing brackets computed in floating point.
fn slack(x: f64) -> f64 {
    1e-12 * x.abs().max(1.0)
}

pub fn decompose(m: &Matrix<u64>) -> ComponentDecomposition {
    let n = m.size();
    let adjacency: Vec<Vec<usize>> = (0..n)
        .map(|a| (0..n).filter(|&b| *m.get(a, b) > 0).collect())
        .collect();
    let mut classes = strongly_connected(&adjacency);
    classes.sort_by_key(|c| c[0]);

    let mut component_of = vec![0; n];
    for (ci, class) in classes.iter().enumerate() {
        for &a in class {
            component_of[a] = ci;
        }
    }

    // condensation reachability, closed transitively
    let count = classes.len();
    let mut reach = vec![vec![false; count]; count];
    for (ci, row) in reach.iter_mut().enumerate() {
        row[ci] = true;
    }
    for a in 0..n {
        for &b in &adjacency[a] {
            reach[component_of[a]][component_of[b]] = true;
        }
    }
    for k in 0..count {
        for i in 0..count {
            if reach[i][k] {
                for j in 0..count {
                    if reach[k][j] {
                        reach[i][j] = true;
                    }
                }
            }
        }
    }

    let float = m.map(|&e| e as f64);
    let rhos: Vec<SpectralEstimate<f64>> = classes
        .iter()
        .map(|class| spectral_radius(&float.submatrix(class), DEFAULT_TOLERANCE, DEFAULT_MAX_ITERATIONS))
        .collect();
    let best_low = rhos.iter().map(|r| r.low).fold(0.0, f64::max);
    // a component whose bracket overlaps the largest lower bound is tied
    // with the leader; transient letters (ρ = 0) never count as maximum
    let maximum: Vec<bool> = rhos
        .iter()
        .map(|r| r.high > 0.0 && r.high + slack(r.high) >= best_low)
        .collect();
    let rho_max = rhos
        .iter()
        .zip(&maximum)
        .filter(|(_, &is_max)| is_max)
        .map(|(r, _)| *r)
        .reduce(|a, b| SpectralEstimate {
            low: a.low.max(b.low),
            high: a.high.max(b.high),
            iterations: a.iterations.max(b.iterations),
            converged: a.converged && b.converged,
        })
        .unwrap_or(SpectralEstimate::exact(0.0));

    let components: Vec<Component> = classes
        .iter()
        .enumerate()
        .map(|(ci, class)| Component {
            letters: class.iter().map(|&a| a as Letter).collect(),
            rho: rhos[ci],
            terminal: (0..count).all(|cj| cj == ci || !reach[ci][cj]),
            maximum: maximum[ci],
            reaches: (0..count).filter(|&cj| reach[ci][cj]).collect(),
        })
        .collect();
    let maxal = (0..n)
        .filter(|&a| components[component_of[a]].reaches.iter().any(|&cj| maximum[cj]))
        .map(|a| a as Letter)
        .collect();

    ComponentDecomposition {
        components,
        component_of,
        maxal,
        rho_max,
    }
}

/// Whether some power `M^t` with `t <= (k-1)^2 + 1` is entrywise positive.
pub fn is_primitive(m: &Matrix<u64>) -> bool {
    let n = m.size();
    let pattern = m.map(|&e| u64::from(e > 0));
    let mut power = pattern.clone();
    let bound = (n.saturating_sub(1)).pow(2) + 1;
    for _ in 1..=bound {
        if power.is_positive() {
            return true;
        }
        power = power.mul(&pattern).map(|&e| u64::from(e > 0));
    }
    false
}

#[cfg(test)]
mod tests {
    use super::*;

    fn m(rows: Vec<Vec<u64>>) -> Matrix<u64> {
        Matrix::from_rows(rows)
    }

    #[test]
    fn tarjan_finds_cycles_and_singletons() {
        let adj = vec![vec![1], vec![0, 2], vec![3], vec![2], vec![]];
        let mut comps = strongly_connected(&adj);
        comps.sort();
        assert_eq!(comps, vec![vec![0, 1], vec![2, 3], vec![4]]);
    }

    #[test]
    fn reducible_growth() {
        // 0 -> 0, 1 -> 11
        let d = decompose(&m(vec![vec![1, 0], vec![0, 2]]));
        assert_eq!(d.components.len(), 2);
        assert!(!d.components[0].maximum && d.components[1].maximum);
        assert!(d.components[0].terminal && d.components[1].terminal);
        assert_eq!(d.maxal, vec![1]);
        assert_eq!(d.rho_max.low, 2.0);
    }

    #[test]
    fn ties_are_all_maximum() {
        let d = decompose(&m(vec![vec![2, 0], vec![0, 2]]));
        assert!(d.components.iter().all(|c| c.maximum));
        assert_eq!(d.maxal, vec![0, 1]);
    }

    #[test]
    fn transient_letters_reach_through() {
        // 0 -> 1 only (transient), 1 -> 11
        let d = decompose(&m(vec![vec![0, 1], vec![0, 2]]));
        assert_eq!(d.components[0].rho.high, 0.0);
        assert!(!d.components[0].maximum && !d.components[0].terminal);
        assert_eq!(d.maxal, vec![0, 1]);
    }

    #[test]
    fn primitivity() {
        assert!(is_primitive(&m(vec![vec![0, 1], vec![1, 1]])));
        assert!(!is_primitive(&m(vec![vec![0, 1], vec![2, 0]])));
        assert!(!is_primitive(&m(vec![vec![2, 0], vec![0, 2]])));
        // Wielandt's extremal matrix needs exactly (k-1)^2 + 1 steps
        let w = m(vec![vec![0, 1, 0], vec![0, 0, 1], vec![1, 1, 0]]);
        assert!(is_primitive(&w));
        assert!(!w.pow(4).is_positive() && w.pow(5).is_positive());
    }
}
