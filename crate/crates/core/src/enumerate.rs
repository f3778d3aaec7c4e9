//! Brute-force generation of staircase polygons and their symmetry census.
//!
//! Polygons are produced as pairs of up/right walks advanced in lockstep, so
//! both walks sit on the same anti-diagonal `x + y = t` at time `t`. This is
//! deliberately independent of the decompositions behind the functional
//! equations.

use std::collections::BTreeMap;
use std::io::Write;

use crate::error::{Error, Result};
use crate::symmetry::{ElementSet, Subgroup, SymmetryClass, SymmetryElement};

/// Largest half-perimeter the enumerator accepts.
pub const MAX_ENUMERATION_M: usize = 16;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Step {
    Up,
    Right,
}

/// A staircase polygon in column form: column `x` holds the cells with rows
/// `bottom <= y < top`. The lower-left cell sits at the origin.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Polygon {
    columns: Vec<(i64, i64)>,
}

impl Polygon {
    pub fn from_columns(columns: Vec<(i64, i64)>) -> Result<Self> {
        let Some(&(b0, _)) = columns.first() else {
            return Err(Error::InvalidPolygon("no columns".into()));
        };
        if b0 != 0 {
            return Err(Error::InvalidPolygon("first column must start at row 0".into()));
        }
        for (i, &(b, t)) in columns.iter().enumerate() {
            if t <= b {
                return Err(Error::InvalidPolygon(format!("empty column {i}")));
            }
            if i > 0 {
                let (pb, pt) = columns[i - 1];
                if b < pb || t < pt {
                    return Err(Error::InvalidPolygon(format!("column {i} steps down")));
                }
                if b >= pt {
                    return Err(Error::InvalidPolygon(format!("columns {} and {i} do not overlap", i - 1)));
                }
            }
        }
        let p = Self { columns };
        if p.height() > 64 {
            return Err(Error::InvalidPolygon("height above 64".into()));
        }
        Ok(p)
    }

    /// Builds a polygon from its upper walk (starting with an up step) and lower walk.
    pub fn from_walks(upper: &[Step], lower: &[Step]) -> Result<Self> {
        if upper.len() != lower.len() || upper.len() < 2 {
            return Err(Error::InvalidPolygon("walks must have equal length >= 2".into()));
        }
        let n = upper.len();
        let (mut xu, mut yu, mut xl, mut yl) = (0i64, 0i64, 0i64, 0i64);
        let mut tops = Vec::new();
        let mut bottoms = Vec::new();
        for t in 0..n {
            match upper[t] {
                Step::Up => yu += 1,
                Step::Right => {
                    tops.push(yu);
                    xu += 1;
                }
            }
            match lower[t] {
                Step::Up => yl += 1,
                Step::Right => {
                    bottoms.push(yl);
                    xl += 1;
                }
            }
            let meet = xu == xl;
            if xu > xl || (meet && t + 1 < n) {
                return Err(Error::InvalidPolygon("walks touch before the end".into()));
            }
            if t + 1 == n && !meet {
                return Err(Error::InvalidPolygon("walks do not share an endpoint".into()));
            }
        }
        Self::from_columns(bottoms.into_iter().zip(tops).collect())
    }

    pub fn columns(&self) -> &[(i64, i64)] {
        &self.columns
    }

    pub fn width(&self) -> i64 {
        self.columns.len() as i64
    }

    pub fn height(&self) -> i64 {
        self.columns.last().map_or(0, |c| c.1)
    }

    pub fn half_perimeter(&self) -> usize {
        (self.width() + self.height()) as usize
    }

    pub fn area(&self) -> usize {
        self.columns.iter().map(|(b, t)| (t - b) as usize).sum()
    }

    pub fn is_fixed(&self, g: SymmetryElement) -> bool {
        fixed_by(&self.columns, g)
    }

    /// The stabilizer of the polygon in the dihedral group.
    pub fn symmetry_signature(&self) -> Subgroup {
        let set = stabilizer(&self.columns);
        Subgroup::from_set(set).expect("stabilizers are subgroups")
    }
}

fn column_masks(columns: &[(i64, i64)]) -> Vec<u64> {
    columns
        .iter()
        .map(|&(b, t)| mask_range(b, t))
        .collect()
}

fn mask_range(b: i64, t: i64) -> u64 {
    let upto = |k: i64| if k >= 64 { u64::MAX } else { (1u64 << k) - 1 };
    upto(t) & !upto(b)
}

fn fixed_by(columns: &[(i64, i64)], g: SymmetryElement) -> bool {
    let w = columns.len() as i64;
    let h = columns.last().map_or(0, |c| c.1);
    if g == SymmetryElement::E {
        return true;
    }
    if g.swaps_axes() && w != h {
        return false;
    }
    // translation putting the image of the bounding box back at the origin,
    // worked out on doubled coordinates so cell centres stay integral
    let corners = [(0, 0), (2 * w, 0), (0, 2 * h), (2 * w, 2 * h)].map(|c| g.apply(c));
    let min_x = corners.iter().map(|c| c.0).min().unwrap();
    let min_y = corners.iter().map(|c| c.1).min().unwrap();
    let image_w = if g.swaps_axes() { h } else { w };
    let mut image = vec![0u64; image_w as usize];
    for (x, &(b, t)) in columns.iter().enumerate() {
        for y in b..t {
            let (cx, cy) = g.apply((2 * x as i64 + 1, 2 * y + 1));
            let (ix, iy) = ((cx - min_x - 1) / 2, (cy - min_y - 1) / 2);
            image[ix as usize] |= 1 << iy;
        }
    }
    image == column_masks(columns)
}

fn stabilizer(columns: &[(i64, i64)]) -> ElementSet {
    let mut set = ElementSet::default();
    for g in SymmetryElement::ALL {
        if fixed_by(columns, g) {
            set.insert(g);
        }
    }
    set
}

/// Visits every staircase polygon with `2 <= m <= m_max` as its column list.
pub fn for_each_polygon(m_max: usize, mut visit: impl FnMut(&[(i64, i64)])) {
    let mut bottoms = vec![0i64; m_max];
    let mut tops = vec![0i64; m_max];
    let mut columns = Vec::with_capacity(m_max);
    // time 1: the upper walk has gone up, the lower walk right along row 0
    bottoms[0] = 0;
    walk(1, (0, 1), (1, 0), m_max, &mut bottoms, &mut tops, &mut columns, &mut visit);
}

#[allow(clippy::too_many_arguments)]
fn walk(
    t: usize,
    upper: (i64, i64),
    lower: (i64, i64),
    m_max: usize,
    bottoms: &mut [i64],
    tops: &mut [i64],
    columns: &mut Vec<(i64, i64)>,
    visit: &mut impl FnMut(&[(i64, i64)]),
) {
    for up_step in [Step::Up, Step::Right] {
        for low_step in [Step::Up, Step::Right] {
            let mut u = upper;
            let mut l = lower;
            if up_step == Step::Right {
                tops[u.0 as usize] = u.1;
                u.0 += 1;
            } else {
                u.1 += 1;
            }
            if low_step == Step::Right {
                bottoms[l.0 as usize] = l.1;
                l.0 += 1;
            } else {
                l.1 += 1;
            }
            let gap = l.0 - u.0;
            if gap < 0 {
                continue;
            }
            if gap == 0 {
                columns.clear();
                columns.extend((0..u.0 as usize).map(|x| (bottoms[x], tops[x])));
                visit(columns);
                continue;
            }
            // the gap closes by at most one per step
            if gap as usize > m_max - (t + 1) {
                continue;
            }
            walk(t + 1, u, l, m_max, bottoms, tops, columns, visit);
        }
    }
}

/// Exact polygon counts by stabilizer, half-perimeter and area.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct CountTable {
    m_max: usize,
    by_stabilizer: BTreeMap<(Subgroup, usize, usize), u64>,
}

/// Enumerates all staircase polygons of half-perimeter at most `m_max`.
pub fn enumerate_counts(m_max: usize) -> Result<CountTable> {
    if !(2..=MAX_ENUMERATION_M).contains(&m_max) {
        return Err(Error::OutOfRange(format!(
            "enumeration bound m_max = {m_max} outside 2..={MAX_ENUMERATION_M}"
        )));
    }
    let mut by_stabilizer = BTreeMap::new();
    for_each_polygon(m_max, |cols| {
        let w = cols.len();
        let h = cols[w - 1].1 as usize;
        let area = cols.iter().map(|(b, t)| (t - b) as usize).sum::<usize>();
        let set = stabilizer(cols);
        let subgroup = Subgroup::from_set(set).expect("stabilizers are subgroups");
        *by_stabilizer.entry((subgroup, w + h, area)).or_insert(0) += 1;
    });
    Ok(CountTable { m_max, by_stabilizer })
}

impl CountTable {
    pub fn m_max(&self) -> usize {
        self.m_max
    }

    /// Polygons of half-perimeter `m` and area `n` in the class.
    pub fn count(&self, class: SymmetryClass, m: usize, n: usize) -> u64 {
        self.sum_where(m, Some(n), |h| class.contains_stabilizer(h.element_set()))
    }

    /// Polygons of half-perimeter `m` in the class, any area.
    pub fn class_total(&self, class: SymmetryClass, m: usize) -> u64 {
        self.sum_where(m, None, |h| class.contains_stabilizer(h.element_set()))
    }

    /// Polygons of half-perimeter `m` and area `n` fixed by `g`.
    pub fn fixed_count(&self, g: SymmetryElement, m: usize, n: usize) -> u64 {
        self.sum_where(m, Some(n), |h| h.element_set().contains(g))
    }

    /// Polygons whose full stabilizer is exactly `h`.
    pub fn stabilizer_count(&self, h: Subgroup, m: usize, n: usize) -> u64 {
        self.by_stabilizer.get(&(h, m, n)).copied().unwrap_or(0)
    }

    fn sum_where(&self, m: usize, n: Option<usize>, keep: impl Fn(Subgroup) -> bool) -> u64 {
        self.by_stabilizer
            .iter()
            .filter(|((h, mm, nn), _)| *mm == m && n.is_none_or(|n| *nn == n) && keep(*h))
            .map(|(_, c)| *c)
            .sum()
    }

    /// Nonzero `(area, count)` pairs of the class at half-perimeter `m`.
    pub fn area_distribution(&self, class: SymmetryClass, m: usize) -> Vec<(usize, u64)> {
        let mut by_area: BTreeMap<usize, u64> = BTreeMap::new();
        for ((h, mm, n), c) in &self.by_stabilizer {
            if *mm == m && class.contains_stabilizer(h.element_set()) {
                *by_area.entry(*n).or_insert(0) += c;
            }
        }
        by_area.into_iter().collect()
    }

    /// All nonzero `(class, m, n, count)` rows, ordered by class name, then `m`, then `n`.
    pub fn rows(&self) -> Vec<(SymmetryClass, usize, usize, u64)> {
        let mut classes = SymmetryClass::ALL.to_vec();
        classes.sort_by_key(|c| c.name());
        let mut rows = Vec::new();
        for class in classes {
            for m in 2..=self.m_max {
                for (n, c) in self.area_distribution(class, m) {
                    rows.push((class, m, n, c));
                }
            }
        }
        rows
    }

    pub fn write_csv<W: Write>(&self, out: W) -> Result<()> {
        let mut w = csv::Writer::from_writer(out);
        w.write_record(["class", "m", "n", "count"])?;
        for (class, m, n, c) in self.rows() {
            w.write_record([class.name().to_string(), m.to_string(), n.to_string(), c.to_string()])?;
        }
        w.flush()?;
        Ok(())
    }
}
