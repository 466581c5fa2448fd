use super::{vec_bytes, RootedTree};

const BLOCK: usize = 64;

/// Range-minimum over a fixed sequence: in-block queries read a 64-bit stack mask,
/// cross-block queries add a sparse table over block minima.
#[derive(Clone, Debug)]
struct BlockRmq {
    keys: Vec<u32>,
    masks: Vec<u64>,
    /// `sparse[t][b]` = position of the minimum over blocks `b..b + 2^t`.
    sparse: Vec<Vec<u32>>,
}

impl BlockRmq {
    fn build(keys: Vec<u32>) -> Self {
        let n = keys.len();
        let mut masks = vec![0u64; n];
        let mut block_min = Vec::with_capacity(n.div_ceil(BLOCK));
        for start in (0..n).step_by(BLOCK) {
            let end = (start + BLOCK).min(n);
            let mut stack: Vec<usize> = Vec::with_capacity(BLOCK);
            let mut bits = 0u64;
            for i in start..end {
                while let Some(&top) = stack.last() {
                    if keys[top] > keys[i] {
                        stack.pop();
                        bits &= !(1u64 << (top - start));
                    } else {
                        break;
                    }
                }
                stack.push(i);
                bits |= 1u64 << (i - start);
                masks[i] = bits;
            }
            block_min.push((start + masks[end - 1].trailing_zeros() as usize) as u32);
        }
        let mut sparse = vec![block_min];
        let mut width = 1;
        while 2 * width <= sparse[0].len() {
            let prev = sparse.last().expect("nonempty");
            let next = (0..prev.len() - width).map(|b| Self::pick(&keys, prev[b], prev[b + width])).collect();
            sparse.push(next);
            width *= 2;
        }
        BlockRmq { keys, masks, sparse }
    }

    fn pick(keys: &[u32], a: u32, b: u32) -> u32 {
        if keys[b as usize] < keys[a as usize] {
            b
        } else {
            a
        }
    }

    fn in_block(&self, l: usize, r: usize) -> u32 {
        let start = l - l % BLOCK;
        let m = self.masks[r] & (!0u64 << (l - start));
        (start + m.trailing_zeros() as usize) as u32
    }

    /// Position of a minimum of `keys[l..=r]`.
    fn argmin(&self, l: usize, r: usize) -> usize {
        let (bl, br) = (l / BLOCK, r / BLOCK);
        if bl == br {
            return self.in_block(l, r) as usize;
        }
        let mut best = Self::pick(&self.keys, self.in_block(l, bl * BLOCK + BLOCK - 1), self.in_block(br * BLOCK, r));
        if bl + 1 < br {
            let (x, y) = (bl + 1, br - 1);
            let t = (usize::BITS - 1 - (y - x + 1).leading_zeros()) as usize;
            let row = &self.sparse[t];
            best = Self::pick(&self.keys, best, Self::pick(&self.keys, row[x], row[y + 1 - (1 << t)]));
        }
        best as usize
    }

    fn overhead_bytes(&self) -> usize {
        vec_bytes(&self.keys) + vec_bytes(&self.masks) + self.sparse.iter().map(|r| vec_bytes(r)).sum::<usize>()
    }
}

/// Constant-time lowest common ancestors via an Euler tour.
#[derive(Clone, Debug)]
pub struct LcaIndex {
    euler: Vec<u32>,
    first: Vec<u32>,
    rmq: BlockRmq,
}

impl LcaIndex {
    pub fn build<E>(tree: &RootedTree<E>) -> Self {
        let n = tree.len();
        let mut euler = Vec::with_capacity(2 * n - 1);
        let mut keys = Vec::with_capacity(2 * n - 1);
        let mut first = vec![0u32; n];
        let mut stack = vec![(tree.root(), 0usize)];
        first[tree.root()] = 0;
        euler.push(tree.root() as u32);
        keys.push(0);
        while let Some(&mut (v, ref mut next)) = stack.last_mut() {
            if let Some(&c) = tree.children(v).get(*next) {
                *next += 1;
                first[c] = euler.len() as u32;
                euler.push(c as u32);
                keys.push(tree.depth(c) as u32);
                stack.push((c, 0));
            } else {
                stack.pop();
                if let Some(&(p, _)) = stack.last() {
                    euler.push(p as u32);
                    keys.push(tree.depth(p) as u32);
                }
            }
        }
        LcaIndex { euler, first, rmq: BlockRmq::build(keys) }
    }

    pub fn lca(&self, u: usize, v: usize) -> usize {
        let (a, b) = (self.first[u] as usize, self.first[v] as usize);
        let (l, r) = if a <= b { (a, b) } else { (b, a) };
        self.euler[self.rmq.argmin(l, r)] as usize
    }

    pub fn overhead_bytes(&self) -> usize {
        vec_bytes(&self.euler) + vec_bytes(&self.first) + self.rmq.overhead_bytes()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::semigroup::MinI64;
    use crate::tree::gen::{random_tree, TreeShape};
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn naive_lca<E>(t: &RootedTree<E>, mut a: usize, mut b: usize) -> usize {
        while t.depth(a) > t.depth(b) {
            a = t.parent(a).unwrap();
        }
        while t.depth(b) > t.depth(a) {
            b = t.parent(b).unwrap();
        }
        while a != b {
            a = t.parent(a).unwrap();
            b = t.parent(b).unwrap();
        }
        a
    }

    #[test]
    fn rmq_matches_scan() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for n in [1, 2, 63, 64, 65, 200, 1000] {
            let keys: Vec<u32> = (0..n).map(|_| rng.gen_range(0..50)).collect();
            let rmq = BlockRmq::build(keys.clone());
            for _ in 0..2000 {
                let a = rng.gen_range(0..n);
                let b = rng.gen_range(a..n);
                let min = *keys[a..=b].iter().min().unwrap();
                assert_eq!(keys[rmq.argmin(a, b)], min);
            }
        }
    }

    #[test]
    fn lca_matches_naive() {
        let mut rng = ChaCha8Rng::seed_from_u64(4);
        for shape in TreeShape::ALL {
            for n in [1, 2, 5, 100, 3000] {
                let t = random_tree(shape, n, &mut rng, &MinI64);
                let idx = LcaIndex::build(&t);
                for _ in 0..500 {
                    let (u, v) = (rng.gen_range(0..n), rng.gen_range(0..n));
                    assert_eq!(idx.lca(u, v), naive_lca(&t, u, v));
                }
            }
        }
    }
}
