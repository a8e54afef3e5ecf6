//! Levenshtein distance over generic sequences.

/// Minimum number of insertions, deletions, and substitutions turning `a`
/// into `b`. Two-row dynamic program: O(|a|·|b|) time, O(min row) space.
pub fn levenshtein<L: PartialEq>(a: &[L], b: &[L]) -> usize {
    if a.is_empty() {
        return b.len();
    }
    if b.is_empty() {
        return a.len();
    }
    let mut prev: Vec<usize> = (0..=b.len()).collect();
    let mut curr = vec![0usize; b.len() + 1];
    for (i, ai) in a.iter().enumerate() {
        curr[0] = i + 1;
        for (j, bj) in b.iter().enumerate() {
            let substitution = prev[j] + usize::from(ai != bj);
            let deletion = prev[j + 1] + 1;
            let insertion = curr[j] + 1;
            curr[j + 1] = substitution.min(deletion).min(insertion);
        }
        std::mem::swap(&mut prev, &mut curr);
    }
    prev[b.len()]
}
