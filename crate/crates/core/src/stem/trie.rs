use std::collections::BTreeMap;

/// Character trie. Suffix tries store keys reversed.
#[derive(Debug, Clone)]
pub struct Trie<V> {
    root: Node<V>,
    len: usize,
}

#[derive(Debug, Clone)]
struct Node<V> {
    children: BTreeMap<char, Node<V>>,
    value: Option<V>,
}

impl<V> Default for Node<V> {
    fn default() -> Self {
        Node {
            children: BTreeMap::new(),
            value: None,
        }
    }
}

impl<V> Default for Trie<V> {
    fn default() -> Self {
        Trie {
            root: Node::default(),
            len: 0,
        }
    }
}

impl<V> Trie<V> {
    pub fn new() -> Self {
        Self::default()
    }

    /// Returns the previous value when the key was already present.
    pub fn insert<I: IntoIterator<Item = char>>(&mut self, key: I, value: V) -> Option<V> {
        let mut node = &mut self.root;
        for ch in key {
            node = node.children.entry(ch).or_default();
        }
        let previous = node.value.replace(value);
        if previous.is_none() {
            self.len += 1;
        }
        previous
    }

    pub fn get<I: IntoIterator<Item = char>>(&self, key: I) -> Option<&V> {
        let mut node = &self.root;
        for ch in key {
            node = node.children.get(&ch)?;
        }
        node.value.as_ref()
    }

    pub fn contains<I: IntoIterator<Item = char>>(&self, key: I) -> bool {
        self.get(key).is_some()
    }

    /// Every stored key that is a prefix of `key`, as (length in chars, value),
    /// shortest first.
    pub fn prefix_matches<I: IntoIterator<Item = char>>(&self, key: I) -> Vec<(usize, &V)> {
        let mut out = Vec::new();
        let mut node = &self.root;
        for (depth, ch) in key.into_iter().enumerate() {
            match node.children.get(&ch) {
                Some(next) => node = next,
                None => break,
            }
            if let Some(v) = &node.value {
                out.push((depth + 1, v));
            }
        }
        out
    }

    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }
}
