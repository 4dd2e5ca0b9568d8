#include <cstdio>
#include "gqlab/boson.hpp"

using namespace gqlab;

int main() {
  BosonContext ctx(1);
  ComplexStructure j0{ctx.space().reference_j()};
  CMatrix e0 = unitary_frame(j0, ctx.space());
  CVector alpha = Complex(0.3, 0.1) * e0.col(0);
  const double bb = 0.6;
  RVector bv(1); bv << bb;
  GeodesicPath path = GeodesicPath::from_normal_form(ctx.space(), j0, CMatrix::Identity(1, 1), bv);
  ComplexStructure j1 = path.sample(1.0);

  GaussianState ga = ctx.coherent_gaussian(j0, alpha);
  GaussianState gt = ctx.gaussian_transport(ga, j1);
  GaussianState bt = ctx.bogoliubov_coherent(j0, j1, alpha);

  // direct evaluation of the displayed formula
  const double det = cut_locus_det(j0, j1);
  const CMatrix w = (0.5 * (j0.j + j1.j)).cast<Complex>().inverse();
  const CMatrix omega = ctx.space().form().cast<Complex>();
  const CMatrix p1 = projection_p(j1);
  const RMatrix q1 = ctx.metric_of(j1);
  auto direct = [&](const RVector& x) {
    CVector u = p1 * x.cast<Complex>() - alpha.conjugate();
    Complex quad = (u.transpose() * omega * w * u)(0, 0);
    return std::pow(det, -0.25) *
           std::exp(0.5 * quad - 0.25 * (x.transpose() * q1 * x)(0));
  };
  for (double t : {0.4, 1.0}) {
    RVector x(2); x << t, -0.5 * t;
    std::printf("x=%g: direct %.10g%+.10gi  gauss_tr %.10g%+.10gi  bogcoh %.10g%+.10gi\n", t,
      direct(x).real(), direct(x).imag(),
      ctx.gaussian_value(gt, x).real(), ctx.gaussian_value(gt, x).imag(),
      ctx.gaussian_value(bt, x).real(), ctx.gaussian_value(bt, x).imag());
  }
  std::printf("lambda gt: %g%+gi, %g%+gi\n", gt.lambda(0).real(), gt.lambda(0).imag(), gt.lambda(1).real(), gt.lambda(1).imag());
  std::printf("lambda bt: %g%+gi, %g%+gi\n", bt.lambda(0).real(), bt.lambda(0).imag(), bt.lambda(1).real(), bt.lambda(1).imag());

  // symplectic chart structures: check -J1 J0 symmetry
  auto at = [&](Complex z) {
    CMatrix zm(1, 1); zm << z;
    return chart_to_j(GraphChart{j0, zm}, ctx.space());
  };
  ComplexStructure ja = at(Complex(0.02, 0.01));
  ComplexStructure jb = at(Complex(0.25, 0.03));
  RMatrix g2 = -jb.j * ja.j;
  std::printf("g2 symmetry resid: %g ; normality resid: %g\n",
              (g2 - g2.transpose()).norm(),
              (g2 * g2.transpose() - g2.transpose() * g2).norm());
  RMatrix g2b = -jb.j * j0.j;
  std::printf("g2-from-j0 symmetry resid: %g\n", (g2b - g2b.transpose()).norm());
  return 0;
}
