//! Characters: q-series, Kac-Wakimoto characters, the reduction to Bershadsky-Polyakov
//! characters, free-field factors and numeric modularity checks.

pub mod orbit;
pub mod series;

pub use orbit::{integral_weyl_orbit, sl3_adm_character, AffineOrbitTerm};
pub use series::{eta_series, f_product, fermionic_ch, mono, LPoly, Mono, QSeries};
pub mod qhr;
pub use qhr::{bp_offset, bp_sf_transport, qhr_character, qhr_verma_character};
pub mod free;
pub use free::{
    free_field_character, generalized_relaxed_character, sf_character_transport, FormalDeltaSeries, FreeFieldCharacter, FreeFieldKind,
    FreeFieldParams, GeneralizedRelaxedCharacter,
};
pub mod numeric;
pub use numeric::{gram_pivot_ratio, numeric_s_check, t_check, SCheckReport, DEFAULT_ORDER};
