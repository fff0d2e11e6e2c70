//! Maximum bipartite matching (Kuhn's augmenting paths).

/// Returns, for each left vertex, its matched right vertex. `adj[u]` lists the right
/// vertices adjacent to `u`; they are tried in the given order, so the result is
/// deterministic.
pub fn max_matching(adj: &[Vec<usize>], right_len: usize) -> Vec<Option<usize>> {
    fn augment(u: usize, adj: &[Vec<usize>], seen: &mut [bool], match_right: &mut [Option<usize>]) -> bool {
        for &v in &adj[u] {
            if seen[v] {
                continue;
            }
            seen[v] = true;
            if match_right[v].is_none_or(|w| augment(w, adj, seen, match_right)) {
                match_right[v] = Some(u);
                return true;
            }
        }
        false
    }

    let mut match_right: Vec<Option<usize>> = vec![None; right_len];
    for u in 0..adj.len() {
        let mut seen = vec![false; right_len];
        augment(u, adj, &mut seen, &mut match_right);
    }
    let mut match_left = vec![None; adj.len()];
    for (v, u) in match_right.iter().enumerate() {
        if let Some(u) = *u {
            match_left[u] = Some(v);
        }
    }
    match_left
}

/// Whether every left vertex can be matched.
pub fn saturates_left(adj: &[Vec<usize>], right_len: usize) -> bool {
    max_matching(adj, right_len).iter().all(Option::is_some)
}
