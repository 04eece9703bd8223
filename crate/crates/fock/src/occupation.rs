use std::fmt;

/// Spatial ports of the two-beam-splitter interferometer.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Port {
    A1,
    A2,
    B1,
    B2,
    B3,
    C2,
    C3,
}

impl Port {
    pub const ALL: [Port; 7] = [
        Port::A1,
        Port::A2,
        Port::B1,
        Port::B2,
        Port::B3,
        Port::C2,
        Port::C3,
    ];

    fn index(self) -> usize {
        self as usize
    }

    pub fn name(self) -> &'static str {
        match self {
            Port::A1 => "a1",
            Port::A2 => "a2",
            Port::B1 => "b1",
            Port::B2 => "b2",
            Port::B3 => "b3",
            Port::C2 => "c2",
            Port::C3 => "c3",
        }
    }
}

/// Spectral basis modes available per port.
pub const SPECTRAL_SLOTS: usize = 3;

const BITS: u32 = 6;
const FIELD: u128 = (1 << BITS) - 1;

/// Largest occupation a single slot can hold.
pub const MAX_OCCUPATION: usize = FIELD as usize;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct ModeIndex {
    pub port: Port,
    pub spectral: usize,
}

impl ModeIndex {
    pub fn new(port: Port, spectral: usize) -> Self {
        assert!(
            spectral < SPECTRAL_SLOTS,
            "spectral index {spectral} out of range"
        );
        Self { port, spectral }
    }

    fn shift(self) -> u32 {
        ((self.port.index() * SPECTRAL_SLOTS + self.spectral) as u32) * BITS
    }
}

/// Occupation numbers of all 21 modes packed six bits apiece.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct Occupation(pub u128);

impl Occupation {
    pub const VACUUM: Occupation = Occupation(0);

    pub fn get(self, m: ModeIndex) -> usize {
        ((self.0 >> m.shift()) & FIELD) as usize
    }

    pub fn with(self, m: ModeIndex, n: usize) -> Self {
        assert!(n <= MAX_OCCUPATION, "occupation {n} overflows a slot");
        let s = m.shift();
        Occupation((self.0 & !(FIELD << s)) | ((n as u128) << s))
    }

    pub fn total(self) -> usize {
        let mut v = self.0;
        let mut t = 0;
        while v != 0 {
            t += (v & FIELD) as usize;
            v >>= BITS;
        }
        t
    }

    pub fn port_total(self, port: Port) -> usize {
        (0..SPECTRAL_SLOTS)
            .map(|k| self.get(ModeIndex::new(port, k)))
            .sum()
    }

    /// Bit mask selecting all slots of the given ports.
    pub fn mask(ports: &[Port]) -> u128 {
        let mut m = 0;
        for &p in ports {
            for k in 0..SPECTRAL_SLOTS {
                m |= FIELD << ModeIndex::new(p, k).shift();
            }
        }
        m
    }

    pub fn restrict(self, mask: u128) -> Self {
        Occupation(self.0 & mask)
    }

    /// Nonzero slots in port order.
    pub fn entries(self) -> impl Iterator<Item = (ModeIndex, usize)> {
        Port::ALL
            .into_iter()
            .flat_map(|p| (0..SPECTRAL_SLOTS).map(move |k| ModeIndex::new(p, k)))
            .filter_map(move |m| match self.get(m) {
                0 => None,
                n => Some((m, n)),
            })
    }
}

impl fmt::Display for Occupation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (m, n) in self.entries() {
            if !first {
                f.write_str(",")?;
            }
            write!(f, "{}[{}]={}", m.port.name(), m.spectral, n)?;
            first = false;
        }
        if first {
            f.write_str("vac")?;
        }
        Ok(())
    }
}
