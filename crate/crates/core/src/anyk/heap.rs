//! Binary min-heap that counts element comparisons.

pub(crate) struct Heap<T> {
    data: Vec<T>,
    pub cmps: u64,
}

impl<T> Heap<T> {
    pub fn new() -> Self {
        Heap {
            data: Vec::new(),
            cmps: 0,
        }
    }

    pub fn from_vec(data: Vec<T>, less: &impl Fn(&T, &T) -> bool) -> Self {
        let mut h = Heap { data, cmps: 0 };
        let n = h.data.len();
        for i in (0..n / 2).rev() {
            h.sift_down(i, less);
        }
        h
    }

    pub fn len(&self) -> usize {
        self.data.len()
    }

    pub fn push(&mut self, x: T, less: &impl Fn(&T, &T) -> bool) {
        self.data.push(x);
        let mut i = self.data.len() - 1;
        while i > 0 {
            let p = (i - 1) / 2;
            self.cmps += 1;
            if less(&self.data[i], &self.data[p]) {
                self.data.swap(i, p);
                i = p;
            } else {
                break;
            }
        }
    }

    pub fn pop(&mut self, less: &impl Fn(&T, &T) -> bool) -> Option<T> {
        let n = self.data.len();
        if n == 0 {
            return None;
        }
        self.data.swap(0, n - 1);
        let top = self.data.pop();
        if !self.data.is_empty() {
            self.sift_down(0, less);
        }
        top
    }

    fn sift_down(&mut self, mut i: usize, less: &impl Fn(&T, &T) -> bool) {
        let n = self.data.len();
        loop {
            let l = 2 * i + 1;
            if l >= n {
                break;
            }
            let r = l + 1;
            let mut m = l;
            if r < n {
                self.cmps += 1;
                if less(&self.data[r], &self.data[l]) {
                    m = r;
                }
            }
            self.cmps += 1;
            if less(&self.data[m], &self.data[i]) {
                self.data.swap(m, i);
                i = m;
            } else {
                break;
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn pops_in_order() {
        let less = |a: &i32, b: &i32| a < b;
        let mut h = Heap::from_vec(vec![5, 3, 9, 1, 7], &less);
        h.push(0, &less);
        h.push(4, &less);
        let mut out = Vec::new();
        while let Some(x) = h.pop(&less) {
            out.push(x);
        }
        assert_eq!(out, vec![0, 1, 3, 4, 5, 7, 9]);
        assert!(h.cmps > 0);
    }
}
