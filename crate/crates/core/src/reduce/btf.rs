//! Block triangular form from the sparsity pattern (coarse and fine
//! Dulmage-Mendelsohn decomposition).

use alloc::vec;
use alloc::vec::Vec;
use core::ops::Range;

use crate::linalg::CMatrix;

/// Row and column orderings that make a matrix block upper triangular.
///
/// Entry `(i, j)` of the permuted matrix is `M[row_perm[i], col_perm[j]]`;
/// block `b` covers `rows[b] x cols[b]` and nothing below-left of the block
/// diagonal is structurally nonzero. Blocks are listed top-left first.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BlockTriangular {
    pub row_perm: Vec<usize>,
    pub col_perm: Vec<usize>,
    pub row_blocks: Vec<Range<usize>>,
    pub col_blocks: Vec<Range<usize>>,
}

impl BlockTriangular {
    pub fn num_blocks(&self) -> usize {
        self.col_blocks.len()
    }

    pub fn apply(&self, m: &CMatrix) -> CMatrix {
        m.select(&self.row_perm, &self.col_perm)
    }
}

struct Pattern {
    rows: usize,
    cols: usize,
    row_adj: Vec<Vec<usize>>,
    col_adj: Vec<Vec<usize>>,
}

fn pattern(m: &CMatrix, rel_tol: f64) -> Pattern {
    let cut = rel_tol * m.max_abs();
    let (r, c) = (m.rows(), m.cols());
    let mut row_adj = vec![Vec::new(); r];
    let mut col_adj = vec![Vec::new(); c];
    for i in 0..r {
        for j in 0..c {
            if m[(i, j)].norm() > cut {
                row_adj[i].push(j);
                col_adj[j].push(i);
            }
        }
    }
    Pattern {
        rows: r,
        cols: c,
        row_adj,
        col_adj,
    }
}

/// Maximum bipartite matching by augmenting paths.
fn max_matching(p: &Pattern) -> (Vec<Option<usize>>, Vec<Option<usize>>) {
    let mut row_of_col: Vec<Option<usize>> = vec![None; p.cols];
    let mut col_of_row: Vec<Option<usize>> = vec![None; p.rows];
    for r0 in 0..p.rows {
        let mut seen = vec![false; p.cols];
        // Iterative DFS over (row, next edge index).
        let mut stack: Vec<(usize, usize)> = vec![(r0, 0)];
        let mut via: Vec<usize> = Vec::new();
        let mut found = false;
        while let Some(&mut (r, ref mut e)) = stack.last_mut() {
            if *e >= p.row_adj[r].len() {
                stack.pop();
                via.pop();
                continue;
            }
            let c = p.row_adj[r][*e];
            *e += 1;
            if seen[c] {
                continue;
            }
            seen[c] = true;
            via.push(c);
            match row_of_col[c] {
                None => {
                    found = true;
                    break;
                }
                Some(r2) => stack.push((r2, 0)),
            }
        }
        if found {
            for (k, &(r, _)) in stack.iter().enumerate() {
                let c = via[k];
                row_of_col[c] = Some(r);
                col_of_row[r] = Some(c);
            }
        }
    }
    (col_of_row, row_of_col)
}

/// Strongly connected components (Tarjan), emitted in reverse topological
/// order.
fn tarjan(adj: &[Vec<usize>], nodes: &[usize]) -> Vec<Vec<usize>> {
    let n = adj.len();
    let mut index = vec![usize::MAX; n];
    let mut low = vec![0; n];
    let mut on = vec![false; n];
    let mut st: Vec<usize> = Vec::new();
    let mut comps = Vec::new();
    let mut counter = 0;
    for &s in nodes {
        if index[s] != usize::MAX {
            continue;
        }
        let mut call: Vec<(usize, usize)> = vec![(s, 0)];
        index[s] = counter;
        low[s] = counter;
        counter += 1;
        st.push(s);
        on[s] = true;
        while let Some(&mut (v, ref mut e)) = call.last_mut() {
            if *e < adj[v].len() {
                let w = adj[v][*e];
                *e += 1;
                if index[w] == usize::MAX {
                    index[w] = counter;
                    low[w] = counter;
                    counter += 1;
                    st.push(w);
                    on[w] = true;
                    call.push((w, 0));
                } else if on[w] {
                    low[v] = low[v].min(index[w]);
                }
            } else {
                call.pop();
                if let Some(&(u, _)) = call.last() {
                    low[u] = low[u].min(low[v]);
                }
                if low[v] == index[v] {
                    let mut comp = Vec::new();
                    loop {
                        let w = st.pop().expect("tarjan stack");
                        on[w] = false;
                        comp.push(w);
                        if w == v {
                            break;
                        }
                    }
                    comp.sort_unstable();
                    comps.push(comp);
                }
            }
        }
    }
    comps
}

/// Permutes `m` to block upper triangular form using entries above
/// `rel_tol * max|m|` as the pattern.
///
/// The leading block collects the structurally column-surplus part, the
/// trailing block the row-surplus part; the square middle part is split
/// into its irreducible diagonal blocks.
pub fn block_triangularize(m: &CMatrix, rel_tol: f64) -> BlockTriangular {
    let p = pattern(m, rel_tol);
    let (col_of_row, row_of_col) = max_matching(&p);

    // Columns reachable from unmatched columns along alternating paths.
    let mut h_col = vec![false; p.cols];
    let mut h_row = vec![false; p.rows];
    let mut stack: Vec<usize> = (0..p.cols).filter(|&c| row_of_col[c].is_none()).collect();
    for &c in &stack {
        h_col[c] = true;
    }
    while let Some(c) = stack.pop() {
        for &r in &p.col_adj[c] {
            if !h_row[r] {
                h_row[r] = true;
                if let Some(c2) = col_of_row[r] {
                    if !h_col[c2] {
                        h_col[c2] = true;
                        stack.push(c2);
                    }
                }
            }
        }
    }
    // Rows reachable from unmatched rows.
    let mut v_row = vec![false; p.rows];
    let mut v_col = vec![false; p.cols];
    let mut stack: Vec<usize> = (0..p.rows).filter(|&r| col_of_row[r].is_none()).collect();
    for &r in &stack {
        v_row[r] = true;
    }
    while let Some(r) = stack.pop() {
        for &c in &p.row_adj[r] {
            if !v_col[c] {
                v_col[c] = true;
                if let Some(r2) = row_of_col[c] {
                    if !v_row[r2] {
                        v_row[r2] = true;
                        stack.push(r2);
                    }
                }
            }
        }
    }

    // Square part: rows matched to columns outside H and V.
    let s_rows: Vec<usize> = (0..p.rows).filter(|&r| !h_row[r] && !v_row[r]).collect();
    let mut adj = vec![Vec::new(); p.rows];
    for &r in &s_rows {
        for &c in &p.row_adj[r] {
            if let Some(r2) = row_of_col[c] {
                if r2 != r && !h_row[r2] && !v_row[r2] {
                    adj[r].push(r2);
                }
            }
        }
    }
    let mut comps = tarjan(&adj, &s_rows);
    comps.reverse();

    let mut row_perm = Vec::with_capacity(p.rows);
    let mut col_perm = Vec::with_capacity(p.cols);
    let mut row_blocks = Vec::new();
    let mut col_blocks = Vec::new();
    let mut push =
        |rows: Vec<usize>, cols: Vec<usize>, rp: &mut Vec<usize>, cp: &mut Vec<usize>| {
            if rows.is_empty() && cols.is_empty() {
                return;
            }
            row_blocks.push(rp.len()..rp.len() + rows.len());
            col_blocks.push(cp.len()..cp.len() + cols.len());
            rp.extend(rows);
            cp.extend(cols);
        };
    let hr: Vec<usize> = (0..p.rows).filter(|&r| h_row[r]).collect();
    let hc: Vec<usize> = (0..p.cols).filter(|&c| h_col[c]).collect();
    push(hr, hc, &mut row_perm, &mut col_perm);
    for comp in comps {
        let cols = comp
            .iter()
            .map(|&r| col_of_row[r].expect("matched"))
            .collect();
        push(comp, cols, &mut row_perm, &mut col_perm);
    }
    let vr: Vec<usize> = (0..p.rows).filter(|&r| v_row[r]).collect();
    let vc: Vec<usize> = (0..p.cols).filter(|&c| v_col[c]).collect();
    push(vr, vc, &mut row_perm, &mut col_perm);

    BlockTriangular {
        row_perm,
        col_perm,
        row_blocks,
        col_blocks,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn is_block_upper(m: &CMatrix, bt: &BlockTriangular) -> bool {
        let pm = bt.apply(m);
        for (bi, rb) in bt.row_blocks.iter().enumerate() {
            for i in rb.clone() {
                for cb in &bt.col_blocks[..bi] {
                    for j in cb.clone() {
                        if pm[(i, j)].norm() != 0.0 {
                            return false;
                        }
                    }
                }
            }
        }
        true
    }

    #[test]
    fn permuted_triangular() {
        // A scrambled lower triangular matrix splits into 1x1 blocks.
        let base = CMatrix::from_real_rows(&[[1.0, 0.0, 0.0], [2.0, 3.0, 0.0], [4.0, 5.0, 6.0]]);
        let m = base.select(&[2, 0, 1], &[1, 2, 0]);
        let bt = block_triangularize(&m, 0.0);
        assert_eq!(bt.num_blocks(), 3);
        assert!(is_block_upper(&m, &bt));
    }

    #[test]
    fn irreducible_and_rectangular_parts() {
        let m = CMatrix::from_real_rows(&[
            [1.0, 1.0, 0.0, 0.0, 0.0],
            [1.0, 1.0, 0.0, 0.0, 0.0],
            [0.0, 1.0, 1.0, 0.0, 0.0],
            [0.0, 0.0, 0.0, 0.0, 0.0],
            [0.0, 0.0, 0.0, 1.0, 1.0],
        ]);
        let bt = block_triangularize(&m, 0.0);
        assert!(is_block_upper(&m, &bt));
        let mut rp = bt.row_perm.clone();
        rp.sort_unstable();
        assert_eq!(rp, (0..5).collect::<Vec<_>>());
        let mut cp = bt.col_perm.clone();
        cp.sort_unstable();
        assert_eq!(cp, (0..5).collect::<Vec<_>>());
    }
}
