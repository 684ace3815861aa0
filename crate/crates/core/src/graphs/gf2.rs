use fixedbitset::FixedBitSet;

use super::Graph;

/// Rank over GF(2) of the matrix whose rows are the given bitsets.
pub fn gf2_rank(mut rows: Vec<FixedBitSet>) -> usize {
    let mut rank = 0;
    while let Some(pivot_row) = rows.pop() {
        let Some(pivot) = pivot_row.ones().next() else { continue };
        rank += 1;
        for r in rows.iter_mut() {
            if r.contains(pivot) {
                r.symmetric_difference_with(&pivot_row);
            }
        }
    }
    rank
}

/// Rank of the adjacency submatrix between `x` and its complement.
pub fn cut_rank(g: &Graph, x: &FixedBitSet) -> usize {
    let n = g.vertex_count();
    let mut y = FixedBitSet::with_capacity(n);
    y.insert_range(..);
    y.difference_with(x);
    let rows = x
        .ones()
        .map(|v| {
            let mut r = g.row(v).clone();
            r.intersect_with(&y);
            r
        })
        .collect();
    gf2_rank(rows)
}
