//! Dense complex structure tensor (CST) orientation fields for grayscale images.
//!
//! An order-`n` feature map is the pair `(I_2n,0, I_n,n)`: a complex field whose
//! argument is `2n` times the dominant `n`-folded texture orientation and whose
//! magnitude is the orientation certainty, plus a real field bounding that
//! magnitude from above. For `n = 1` this is the structure tensor in double-angle
//! form: `I20 = (l1 - l2) exp(2i angle(u1))`, `I11 = l1 + l2`.
//!
//! ```
//! use cst_core::{cst_extract, planar_wave, CstParams, WaveSpec};
//!
//! let img = planar_wave(&WaveSpec::new(8.0, 30.0), 64, 64).unwrap();
//! let maps = cst_extract(&img, &CstParams::default()).unwrap();
//! let c = maps[0].i2n0().get(32, 32);
//! assert!((c.arg().to_degrees() - 60.0).abs() < 1.0);
//! ```

pub mod channels;
pub mod convolve;
pub mod error;
pub mod feature;
pub mod field;
pub mod filters;
pub mod io;
pub mod oracle;
pub mod params;
pub mod pipeline;
pub mod stats;
pub mod synth;
pub mod validate;
pub mod viz;

pub use channels::{assemble, parse_labels, preset_labels, Selection, PRESETS};
pub use convolve::{convolve_real, convolve_separable, convolve_separable_complex};
pub use error::{CstError, Result};
pub use feature::{ChannelLabel, ChannelStack, CstFeatureMap};
pub use field::{ComplexField, Field, ScalarField};
pub use filters::{complex_dog_kernel, gaussian_kernel, SeparableKernel};
pub use io::{load_gray, write_tensor, DType};
pub use num_complex::Complex64;
pub use params::{validate_params, Boundary, CstParams};
pub use pipeline::{complex_power_step, cst_extract, cst_order};
pub use synth::{crossed_waves, planar_wave, white_noise, WaveSpec};
pub use viz::{render_hsv, RgbImage};
