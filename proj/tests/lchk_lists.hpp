#pragma once

// The classified D matrices in dimensions 4, 8 and 12, with their
// hyperkahler flag. Parameters p, q are sampled by the caller.

#include <string>

#include "support.hpp"

namespace aalg::testing {

struct LchkEntry {
  std::string name;
  Matrix<Q> d;
  bool hyperkahler;
};

/// Places [[s, t], [-t, s]] on the 0-based index pair (i, i+1).
inline void rotation(Matrix<Q>& d, std::size_t i, const Q& s, const Q& t) {
  d(i, i) = s;
  d(i + 1, i + 1) = s;
  d(i, i + 1) = t;
  d(i + 1, i) = -t;
}

inline std::vector<LchkEntry> lchk_lists(const Q& p, const Q& q) {
  std::vector<LchkEntry> out;
  out.push_back({"m1 4R", Matrix<Q>(3, 3), true});
  out.push_back({"m1 id", Matrix<Q>::identity(3), false});

  out.push_back({"m2 8R", Matrix<Q>(7, 7), true});
  Matrix<Q> d2(7, 7);
  rotation(d2, 0, 0, 1);
  rotation(d2, 2, 0, 1);
  out.push_back({"m2 rotation", d2, true});
  out.push_back({"m2 id", Matrix<Q>::identity(7), false});
  Matrix<Q> d2p = Matrix<Q>::identity(7);
  rotation(d2p, 3, 1, p);
  rotation(d2p, 5, 1, p);
  out.push_back({"m2 id p", d2p, false});

  out.push_back({"m3 12R", Matrix<Q>(11, 11), true});
  Matrix<Q> d3(11, 11);
  rotation(d3, 0, 0, 1);
  rotation(d3, 2, 0, 1);
  out.push_back({"m3 rotation", d3, true});
  Matrix<Q> d3p = d3;
  rotation(d3p, 4, 0, p);
  rotation(d3p, 6, 0, p);
  out.push_back({"m3 rotation p", d3p, true});
  out.push_back({"m3 id", Matrix<Q>::identity(11), false});
  Matrix<Q> d3q = Matrix<Q>::identity(11);
  rotation(d3q, 7, 1, p);
  rotation(d3q, 9, 1, p);
  out.push_back({"m3 id p", d3q, false});
  Matrix<Q> d3pq = Matrix<Q>::identity(11);
  rotation(d3pq, 3, 1, p);
  rotation(d3pq, 5, 1, p);
  rotation(d3pq, 7, 1, q);
  rotation(d3pq, 9, 1, q);
  out.push_back({"m3 id pq", d3pq, false});
  return out;
}

}  // namespace aalg::testing
