//! Slice kernels for multiplication by a constant in GF(2^m), m <= 8.
//!
//! `r * a` is split over the two nibbles of `a`: `lo[a & 15] ^ hi[a >> 4]`,
//! which maps directly onto byte shuffles. Multiplication by `r` is also a
//! GF(2)-linear map on the bits of `a`, applied by the GFNI affine
//! instruction where available. Elements are stored as `u16` with a zero
//! high byte; both forms map the zero byte to zero.

use crate::gf::{Elem, Field};

#[derive(Clone, Copy, Debug)]
pub(crate) struct Nibbles {
    pub lo: [u8; 16],
    pub hi: [u8; 16],
    /// Bit matrix of `a -> r * a` in the layout of `gf2p8affineqb`.
    affine: u64,
}

impl Nibbles {
    pub fn new(f: &Field, r: Elem) -> Self {
        let q = f.order() as u16;
        let mut lo = [0u8; 16];
        let mut hi = [0u8; 16];
        for i in 0..16u16 {
            if i < q {
                lo[i as usize] = f.mul(r, Elem(i)).0 as u8;
            }
            if (i << 4) < q {
                hi[i as usize] = f.mul(r, Elem(i << 4)).0 as u8;
            }
        }
        let mut affine = 0u64;
        for c in 0..f.degree().min(8) {
            let col = f.mul(r, Elem(1 << c)).0;
            for i in 0..8 {
                if col >> i & 1 == 1 {
                    affine |= 1u64 << (8 * (7 - i) + c);
                }
            }
        }
        Nibbles { lo, hi, affine }
    }

    #[inline(always)]
    fn apply(&self, a: u16) -> u16 {
        (self.lo[(a & 15) as usize] ^ self.hi[(a >> 4) as usize]) as u16
    }
}

/// Whether `f` is served by these kernels.
pub(crate) fn supported(f: &Field) -> bool {
    f.characteristic() == 2 && f.degree() <= 8
}

/// `dst ^= r * src`.
pub(crate) fn xor_mul(dst: &mut [u16], src: &[u16], t: &Nibbles) {
    let n = dst.len().min(src.len());
    let (dst, src) = (&mut dst[..n], &src[..n]);
    #[cfg(target_arch = "x86_64")]
    {
        if gfni512() {
            // SAFETY: features checked above
            unsafe { xor_mul_gfni(dst, src, t) };
            return;
        }
        if is_x86_feature_detected!("avx2") {
            // SAFETY: feature checked above
            unsafe { xor_mul_avx2(dst, src, t) };
            return;
        }
    }
    for (d, &s) in dst.iter_mut().zip(src) {
        *d ^= t.apply(s);
    }
}

/// `dst = r * src`.
pub(crate) fn mul_into(dst: &mut [u16], src: &[u16], t: &Nibbles) {
    let n = dst.len().min(src.len());
    let (dst, src) = (&mut dst[..n], &src[..n]);
    #[cfg(target_arch = "x86_64")]
    {
        if gfni512() {
            // SAFETY: features checked above
            unsafe { mul_into_gfni(dst, src, t) };
            return;
        }
        if is_x86_feature_detected!("avx2") {
            // SAFETY: feature checked above
            unsafe { mul_into_avx2(dst, src, t) };
            return;
        }
    }
    for (d, &s) in dst.iter_mut().zip(src) {
        *d = t.apply(s);
    }
}

#[cfg(target_arch = "x86_64")]
fn gfni512() -> bool {
    is_x86_feature_detected!("gfni") && is_x86_feature_detected!("avx512bw")
}

#[cfg(target_arch = "x86_64")]
#[target_feature(enable = "gfni,avx512f,avx512bw")]
unsafe fn xor_mul_gfni(dst: &mut [u16], src: &[u16], t: &Nibbles) {
    use std::arch::x86_64::*;
    let a = _mm512_set1_epi64(t.affine as i64);
    let n = dst.len();
    let mut i = 0;
    while i < n {
        let k: __mmask32 = if n - i >= 32 { !0 } else { (1u32 << (n - i)) - 1 };
        let s = _mm512_maskz_loadu_epi16(k, src.as_ptr().add(i) as *const i16);
        let d = _mm512_maskz_loadu_epi16(k, dst.as_ptr().add(i) as *const i16);
        let p = _mm512_gf2p8affine_epi64_epi8::<0>(s, a);
        _mm512_mask_storeu_epi16(dst.as_mut_ptr().add(i) as *mut i16, k, _mm512_xor_si512(d, p));
        i += 32;
    }
}

#[cfg(target_arch = "x86_64")]
#[target_feature(enable = "gfni,avx512f,avx512bw")]
unsafe fn mul_into_gfni(dst: &mut [u16], src: &[u16], t: &Nibbles) {
    use std::arch::x86_64::*;
    let a = _mm512_set1_epi64(t.affine as i64);
    let n = dst.len();
    let mut i = 0;
    while i < n {
        let k: __mmask32 = if n - i >= 32 { !0 } else { (1u32 << (n - i)) - 1 };
        let s = _mm512_maskz_loadu_epi16(k, src.as_ptr().add(i) as *const i16);
        let p = _mm512_gf2p8affine_epi64_epi8::<0>(s, a);
        _mm512_mask_storeu_epi16(dst.as_mut_ptr().add(i) as *mut i16, k, p);
        i += 32;
    }
}

#[cfg(target_arch = "x86_64")]
#[target_feature(enable = "avx2")]
unsafe fn product_avx2(
    v: std::arch::x86_64::__m256i,
    lo: std::arch::x86_64::__m256i,
    hi: std::arch::x86_64::__m256i,
) -> std::arch::x86_64::__m256i {
    use std::arch::x86_64::*;
    let mask = _mm256_set1_epi16(0x0f);
    let a = _mm256_and_si256(v, mask);
    let b = _mm256_and_si256(_mm256_srli_epi16(v, 4), mask);
    _mm256_xor_si256(_mm256_shuffle_epi8(lo, a), _mm256_shuffle_epi8(hi, b))
}

#[cfg(target_arch = "x86_64")]
#[target_feature(enable = "avx2")]
unsafe fn tables_avx2(t: &Nibbles) -> (std::arch::x86_64::__m256i, std::arch::x86_64::__m256i) {
    use std::arch::x86_64::*;
    let lo = _mm_loadu_si128(t.lo.as_ptr() as *const __m128i);
    let hi = _mm_loadu_si128(t.hi.as_ptr() as *const __m128i);
    (_mm256_broadcastsi128_si256(lo), _mm256_broadcastsi128_si256(hi))
}

#[cfg(target_arch = "x86_64")]
#[target_feature(enable = "avx2")]
unsafe fn xor_mul_avx2(dst: &mut [u16], src: &[u16], t: &Nibbles) {
    use std::arch::x86_64::*;
    let (lo, hi) = tables_avx2(t);
    let n = dst.len();
    let mut i = 0;
    while i + 16 <= n {
        let s = _mm256_loadu_si256(src.as_ptr().add(i) as *const __m256i);
        let d = _mm256_loadu_si256(dst.as_ptr().add(i) as *const __m256i);
        let p = product_avx2(s, lo, hi);
        _mm256_storeu_si256(dst.as_mut_ptr().add(i) as *mut __m256i, _mm256_xor_si256(d, p));
        i += 16;
    }
    for j in i..n {
        dst[j] ^= t.apply(src[j]);
    }
}

#[cfg(target_arch = "x86_64")]
#[target_feature(enable = "avx2")]
unsafe fn mul_into_avx2(dst: &mut [u16], src: &[u16], t: &Nibbles) {
    use std::arch::x86_64::*;
    let (lo, hi) = tables_avx2(t);
    let n = dst.len();
    let mut i = 0;
    while i + 16 <= n {
        let s = _mm256_loadu_si256(src.as_ptr().add(i) as *const __m256i);
        _mm256_storeu_si256(dst.as_mut_ptr().add(i) as *mut __m256i, product_avx2(s, lo, hi));
        i += 16;
    }
    for j in i..n {
        dst[j] = t.apply(src[j]);
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn kernels_match_field() {
        for m in [1u32, 2, 4, 5, 8] {
            let f = Field::new(2, m).unwrap();
            let q = f.order() as u16;
            let src: Vec<u16> = (0..77).map(|i| (i * 37 + 11) % q).collect();
            for r in f.elements() {
                let t = Nibbles::new(&f, r);
                let mut a: Vec<u16> = (0..77).map(|i| (i * 5 + 3) % q).collect();
                let base = a.clone();
                xor_mul(&mut a, &src, &t);
                let mut b = vec![0u16; 77];
                mul_into(&mut b, &src, &t);
                for i in 0..77 {
                    let p = f.mul(r, Elem(src[i]));
                    assert_eq!(a[i], base[i] ^ p.0);
                    assert_eq!(b[i], p.0);
                }
            }
        }
    }
}
