use crate::{Error, Result};

/// Sign of a nonzero index, as `±1`.
#[inline]
pub fn sgn(m: i32) -> i32 {
    if m > 0 {
        1
    } else if m < 0 {
        -1
    } else {
        0
    }
}

/// The index window `{-N,…,-1,1,…,N}`.
///
/// Slots run over negatives ascending, then positives ascending, so
/// `slot(-N) = 0`, `slot(-1) = N-1`, `slot(1) = N`, `slot(N) = 2N-1`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Window {
    n: usize,
}

impl Window {
    pub fn new(n: usize) -> Result<Self> {
        if n == 0 || n > i32::MAX as usize / 2 {
            return Err(Error::InvalidArgument("window size must be positive"));
        }
        Ok(Window { n })
    }

    #[inline]
    pub fn n(&self) -> usize {
        self.n
    }

    /// Number of indices, `2N`.
    #[inline]
    pub fn dim(&self) -> usize {
        2 * self.n
    }

    #[inline]
    pub fn contains(&self, m: i32) -> bool {
        m != 0 && m.unsigned_abs() as usize <= self.n
    }

    /// Slot of index `m`. Panics if `m` is outside the window.
    #[inline]
    pub fn slot(&self, m: i32) -> usize {
        debug_assert!(self.contains(m), "index {m} outside window N={}", self.n);
        let n = self.n as i32;
        if m < 0 {
            (m + n) as usize
        } else {
            (m + n - 1) as usize
        }
    }

    pub fn try_slot(&self, m: i32) -> Result<usize> {
        if self.contains(m) {
            Ok(self.slot(m))
        } else {
            Err(Error::OutOfWindow {
                index: m,
                n: self.n,
            })
        }
    }

    /// Inverse of [`Window::slot`].
    #[inline]
    pub fn index(&self, slot: usize) -> i32 {
        let n = self.n as i32;
        let s = slot as i32;
        if s < n {
            s - n
        } else {
            s - n + 1
        }
    }

    /// Indices in serialization order.
    pub fn indices(&self) -> impl Iterator<Item = i32> + Clone {
        let n = self.n as i32;
        (-n..=-1).chain(1..=n)
    }

    pub(crate) fn check_same(&self, other: &Window) -> Result<()> {
        if self.n == other.n {
            Ok(())
        } else {
            Err(Error::WindowMismatch {
                left: self.n,
                right: other.n,
            })
        }
    }
}
