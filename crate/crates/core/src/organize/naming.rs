use std::collections::BTreeSet;

/// Terms of a centroid heaviest first, ties alphabetical.
pub fn ordered_terms(centroid: &[(String, f64)]) -> Vec<String> {
    let mut terms: Vec<&(String, f64)> = centroid.iter().collect();
    terms.sort_by(|a, b| b.1.total_cmp(&a.1).then(a.0.cmp(&b.0)));
    terms.into_iter().map(|(t, _)| t.clone()).collect()
}

/// Names for a set of centroids. The name length grows from `min_len` until
/// the names are pairwise distinct as word sets, stopping at `max_len`;
/// names still colliding at the cap get a `#2`, `#3`, ... word appended.
/// Each name is returned heaviest term first.
pub fn name_centroids(centroids: &[Vec<(String, f64)>], min_len: usize, max_len: usize) -> Vec<Vec<String>> {
    let ordered: Vec<Vec<String>> = centroids.iter().map(|c| ordered_terms(c)).collect();
    let longest = ordered.iter().map(Vec::len).max().unwrap_or(0);
    let min_len = min_len.max(1);
    let cap = max_len.max(min_len);
    let mut m = min_len;
    loop {
        let names: Vec<Vec<String>> = ordered.iter().map(|o| o.iter().take(m).cloned().collect()).collect();
        if distinct(&names) {
            return names;
        }
        // longer names cannot separate anything once every centroid is exhausted
        if m >= cap || m >= longest {
            return disambiguate(names);
        }
        m += 1;
    }
}

fn as_set(name: &[String]) -> BTreeSet<&str> {
    name.iter().map(String::as_str).collect()
}

fn distinct(names: &[Vec<String>]) -> bool {
    let sets: BTreeSet<BTreeSet<&str>> = names.iter().map(|n| as_set(n)).collect();
    sets.len() == names.len()
}

fn disambiguate(names: Vec<Vec<String>>) -> Vec<Vec<String>> {
    let mut out = names.clone();
    for i in 1..names.len() {
        let earlier = (0..i).filter(|&j| as_set(&names[j]) == as_set(&names[i])).count();
        if earlier > 0 {
            out[i].push(format!("#{}", earlier + 1));
        }
    }
    out
}
