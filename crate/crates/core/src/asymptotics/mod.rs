mod bounds;
mod fit;
mod linalg;
mod multpoly;
mod series;
mod stirling;
mod table2;

pub use bounds::{
    corollary1_deviation, f_bound, lemma6_bounds, lemma6_monotone, lemma6_scaled_gap, theorem2_pochhammer,
    theorem2_product, theorem2_scaled_error, PiLinear, LEMMA6_GAP_CONSTANT,
};
pub use fit::{fit_rational, Poly, RationalFunctionOfG, HARD_DEGREE_CAP};
pub use multpoly::{variable_degree, MultPoly};
pub use series::{SeriesInvX, Var};
pub use stirling::{gamma_shift, gamma_tail, largest_series, one_point_series, pi_gamma_series, stirling_log_gamma};
pub use table2::{chat_poly, chat_series, ctilde_poly, ctilde_series, pattern_ratio, pattern_samples, MAX_K, PATTERNS};
