//! Exact arithmetic substrate: primes, integer convolution, prime and
//! extension fields, polynomials, and big rationals.

pub mod convolve;
pub mod field;
pub mod poly;
pub mod primes;
pub mod rational;

pub use convolve::exact_convolve;
pub use field::{ExtElem, ExtField, Field, PrimeField};
pub use poly::{check_irreducible, find_irreducible, interpolate, multipoint_eval, DensePolynomial};
pub use primes::{is_prime, primes_first};
