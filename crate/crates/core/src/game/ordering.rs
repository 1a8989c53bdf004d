use std::fmt;
use std::str::FromStr;

use super::GameError;
use crate::Action;

/// A fixed permutation of the actions used by an opponent to break ties and to
/// pick shift targets. `order[k]` is the k-th action in the ordering.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct ActionOrdering {
    order: Vec<Action>,
    rank: Vec<usize>,
}

impl ActionOrdering {
    pub fn new(order: Vec<Action>) -> Result<Self, GameError> {
        let n = order.len();
        let mut rank = vec![usize::MAX; n];
        for (k, &a) in order.iter().enumerate() {
            if a >= n {
                return Err(GameError::InvalidOrdering(format!(
                    "action {a} out of range for {n} actions"
                )));
            }
            if rank[a] != usize::MAX {
                return Err(GameError::InvalidOrdering(format!("action {a} appears twice")));
            }
            rank[a] = k;
        }
        Ok(ActionOrdering { order, rank })
    }

    pub fn identity(n: usize) -> Self {
        ActionOrdering { order: (0..n).collect(), rank: (0..n).collect() }
    }

    pub fn len(&self) -> usize {
        self.order.len()
    }

    pub fn is_empty(&self) -> bool {
        self.order.is_empty()
    }

    pub fn as_slice(&self) -> &[Action] {
        &self.order
    }

    pub fn first(&self) -> Action {
        self.order[0]
    }

    /// Zero-based position of `a` in the ordering.
    pub fn rank(&self, a: Action) -> usize {
        self.rank[a]
    }

    /// The action after `a`, wrapping from the last back to the first.
    pub fn successor(&self, a: Action) -> Action {
        self.order[(self.rank[a] + 1) % self.order.len()]
    }

    /// Earliest action of `candidates` under this ordering.
    pub fn earliest<I: IntoIterator<Item = Action>>(&self, candidates: I) -> Option<Action> {
        candidates.into_iter().min_by_key(|&a| self.rank[a])
    }

    /// Earliest action maximizing `score`. Ties go to the earlier action.
    pub fn argmax_by<K: Ord, F: FnMut(Action) -> K>(&self, mut score: F) -> Action {
        let mut best = self.order[0];
        let mut best_key = score(best);
        for &a in &self.order[1..] {
            let key = score(a);
            if key > best_key {
                best = a;
                best_key = key;
            }
        }
        best
    }

    /// All n! orderings in lexicographic order of their permutation vectors.
    pub fn all(n: usize) -> Vec<ActionOrdering> {
        let mut out = Vec::new();
        let mut perm: Vec<Action> = (0..n).collect();
        loop {
            out.push(ActionOrdering::new(perm.clone()).expect("permutation"));
            // next lexicographic permutation
            let Some(i) = (0..n.saturating_sub(1)).rev().find(|&i| perm[i] < perm[i + 1]) else {
                break;
            };
            let j = (i + 1..n).rev().find(|&j| perm[j] > perm[i]).expect("successor exists");
            perm.swap(i, j);
            perm[i + 1..].reverse();
        }
        out
    }
}

impl fmt::Display for ActionOrdering {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.order.iter().map(|a| a.to_string()).collect();
        write!(f, "{}", parts.join(","))
    }
}

impl FromStr for ActionOrdering {
    type Err = GameError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let order = s
            .split(',')
            .map(|p| {
                p.trim()
                    .parse::<Action>()
                    .map_err(|_| GameError::InvalidOrdering(format!("bad action index `{p}`")))
            })
            .collect::<Result<Vec<_>, _>>()?;
        ActionOrdering::new(order)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn successor_wraps() {
        let o: ActionOrdering = "2,0,1".parse().unwrap();
        assert_eq!(o.first(), 2);
        assert_eq!(o.successor(2), 0);
        assert_eq!(o.successor(1), 2);
        assert_eq!(o.rank(1), 2);
    }

    #[test]
    fn rejects_non_permutations() {
        assert!("0,0,1".parse::<ActionOrdering>().is_err());
        assert!("0,3,1".parse::<ActionOrdering>().is_err());
        assert!("a,b".parse::<ActionOrdering>().is_err());
    }

    #[test]
    fn all_orderings_are_sorted_and_complete() {
        let all = ActionOrdering::all(4);
        assert_eq!(all.len(), 24);
        assert!(all.windows(2).all(|w| w[0].as_slice() < w[1].as_slice()));
        assert_eq!(all[0], ActionOrdering::identity(4));
    }

    #[test]
    fn argmax_prefers_earlier() {
        let o: ActionOrdering = "2,1,0".parse().unwrap();
        assert_eq!(o.argmax_by(|a| if a == 2 { 0 } else { 1 }), 1);
        assert_eq!(o.argmax_by(|_| 0), 2);
    }
}
