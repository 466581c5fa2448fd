use super::{vec_bytes, RootedTree};
use crate::Error;

/// Ancestor-at-depth queries by binary lifting.
#[derive(Clone, Debug)]
pub struct LevelAncestorIndex {
    depth: Vec<u32>,
    /// `jump[t][v]` = the `2^t`-th ancestor of `v`, clamped at the root.
    jump: Vec<Vec<u32>>,
}

impl LevelAncestorIndex {
    pub fn build<E>(tree: &RootedTree<E>) -> Self {
        let n = tree.len();
        let depth: Vec<u32> = (0..n).map(|v| tree.depth(v) as u32).collect();
        let base: Vec<u32> = (0..n).map(|v| tree.parent(v).unwrap_or(v) as u32).collect();
        let max_depth = depth.iter().copied().max().unwrap_or(0) as usize;
        let mut jump = vec![base];
        while (1usize << jump.len()) <= max_depth {
            let prev = jump.last().expect("nonempty");
            let next = prev.iter().map(|&a| prev[a as usize]).collect();
            jump.push(next);
        }
        LevelAncestorIndex { depth, jump }
    }

    /// The ancestor of `v` at depth `d`.
    pub fn query(&self, v: usize, d: usize) -> Result<usize, Error> {
        let Some(&dv) = self.depth.get(v) else {
            return Err(Error::InvalidVertex(v));
        };
        if d > dv as usize {
            return Err(Error::DepthOutOfRange { depth: d, max: dv as usize });
        }
        Ok(self.ancestor(v, d))
    }

    pub(crate) fn ancestor(&self, v: usize, d: usize) -> usize {
        let mut diff = self.depth[v] as usize - d;
        let mut x = v as u32;
        let mut t = 0;
        while diff > 0 {
            if diff & 1 == 1 {
                x = self.jump[t][x as usize];
            }
            diff >>= 1;
            t += 1;
        }
        x as usize
    }

    pub fn overhead_bytes(&self) -> usize {
        vec_bytes(&self.depth) + self.jump.iter().map(|r| vec_bytes(r)).sum::<usize>()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::semigroup::MinI64;
    use crate::tree::gen::{random_tree, TreeShape};
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn matches_parent_walk() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        for shape in TreeShape::ALL {
            for n in [1, 2, 9, 300] {
                let t = random_tree(shape, n, &mut rng, &MinI64);
                let la = LevelAncestorIndex::build(&t);
                for v in 0..n {
                    let mut x = v;
                    for d in (0..=t.depth(v)).rev() {
                        assert_eq!(la.query(v, d).unwrap(), x);
                        x = t.parent(x).unwrap_or(x);
                    }
                    assert!(matches!(la.query(v, t.depth(v) + 1), Err(Error::DepthOutOfRange { .. })));
                }
            }
        }
    }
}
