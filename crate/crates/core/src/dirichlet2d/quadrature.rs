use crate::scalar::{from_usize, lit, Real};

/// Gauss–Legendre nodes and weights on `[-1, 1]`, ascending.
///
/// Roots of `P_n` by Newton's method from Chebyshev starting guesses.
pub fn gauss_legendre<T: Real>(n: usize) -> (Vec<T>, Vec<T>) {
    let mut nodes = vec![T::zero(); n];
    let mut weights = vec![T::zero(); n];
    let nf = from_usize::<T>(n);
    let quarter: T = lit(0.25);
    let half: T = lit(0.5);
    let two: T = lit(2.0);
    for i in 0..n.div_ceil(2) {
        let mut x = (T::pi() * (from_usize::<T>(i + 1) - quarter) / (nf + half)).cos();
        let mut dp = T::one();
        for _ in 0..100 {
            let (p, d) = legendre_with_derivative(n, x);
            dp = d;
            let dx = p / d;
            x -= dx;
            if dx.abs() <= T::eps() * lit(4.0) {
                break;
            }
        }
        let (_, d) = legendre_with_derivative(n, x);
        if d != T::zero() {
            dp = d;
        }
        let w = two / ((T::one() - x * x) * dp * dp);
        nodes[i] = -x;
        nodes[n - 1 - i] = x;
        weights[i] = w;
        weights[n - 1 - i] = w;
    }
    if n % 2 == 1 {
        nodes[n / 2] = T::zero();
    }
    (nodes, weights)
}

fn legendre_with_derivative<T: Real>(n: usize, x: T) -> (T, T) {
    let mut p0 = T::one();
    let mut p1 = x;
    if n == 0 {
        return (T::one(), T::zero());
    }
    for k in 2..=n {
        let kf = from_usize::<T>(k);
        let p2 = ((kf + kf - T::one()) * x * p1 - (kf - T::one()) * p0) / kf;
        p0 = p1;
        p1 = p2;
    }
    let nf = from_usize::<T>(n);
    let d = nf * (x * p1 - p0) / (x * x - T::one());
    (p1, d)
}

/// Gauss–Legendre rule mapped to `[a, b]`.
pub fn gauss_legendre_on<T: Real>(n: usize, a: T, b: T) -> (Vec<T>, Vec<T>) {
    let (x, w) = gauss_legendre::<T>(n);
    let half: T = lit(0.5);
    let mid = (a + b) * half;
    let rad = (b - a) * half;
    (x.iter().map(|&t| mid + rad * t).collect(), w.iter().map(|&t| t * rad).collect())
}
