#include "dyntop/relations.hpp"

namespace dyntop {

RegionalWitness witness_from_sync(const CylPoint& x, const CylPoint& y, const Rational& eps,
                                  std::uint64_t sync_time, const Rational& joint_dist_sq) {
  if (!(joint_dist_sq < eps * eps))
    throw std::invalid_argument("sync evidence does not fit the requested eps");
  RegionalWitness w;
  w.x = x;
  w.y = y;
  w.x_approx = x;
  w.y_approx = y;
  w.eps = eps;
  w.d = 1;
  w.nbar = {BigInt(std::max<std::uint64_t>(sync_time, 1))};
  RegionalCheck chk;
  chk.alpha = {1};
  chk.time = w.nbar[0];
  chk.dist_sq_value = joint_dist_sq;
  w.checks.push_back(std::move(chk));
  return w;
}

}  // namespace dyntop
