use serde::{Deserialize, Serialize};

/// Weights of a coordinate, a derivative, a Clifford factor and the formal parameter.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct GradingWeights {
    pub w_x: i64,
    pub w_d: i64,
    pub w_c: i64,
    pub w_param: i64,
}

impl GradingWeights {
    pub const CLIFFORD: GradingWeights = GradingWeights {
        w_x: -1,
        w_d: 1,
        w_c: 1,
        w_param: 0,
    };

    pub const LINE_BUNDLE: GradingWeights = GradingWeights {
        w_x: -1,
        w_d: 1,
        w_c: 0,
        w_param: 2,
    };

    pub const ODD: GradingWeights = GradingWeights {
        w_x: -1,
        w_d: 1,
        w_c: 0,
        w_param: 1,
    };

    /// Parabolic scaling `x ~ r^{-1/2}` used to isolate the odd-dimensional model operator.
    pub const ODD_PARABOLIC: GradingWeights = GradingWeights {
        w_x: -1,
        w_d: 1,
        w_c: 0,
        w_param: 2,
    };

    pub const PRESETS: [(&'static str, GradingWeights); 3] = [
        ("cG", Self::CLIFFORD),
        ("pG", Self::LINE_BUNDLE),
        ("rG", Self::ODD),
    ];

    pub fn weight(&self, xdeg: usize, ddeg: usize, word_len: usize, param: u32) -> i64 {
        self.w_x * xdeg as i64 + self.w_d * ddeg as i64 + self.w_c * word_len as i64 + self.w_param * param as i64
    }

    pub fn name(&self) -> String {
        Self::PRESETS
            .iter()
            .find(|(_, w)| w == self)
            .map(|(n, _)| n.to_string())
            .unwrap_or_else(|| format!("({}, {}, {}, {})", self.w_x, self.w_d, self.w_c, self.w_param))
    }
}
