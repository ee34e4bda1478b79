// Catalog of the 74 isomorphism classes of groups of order <= 24, built from
// the table combinators. Dn here is the symmetry group of the n-gon (order
// 2n); Dic_n is the dicyclic group of order 4n; names follow common structure
// notation. Tests validate per-order counts and pairwise non-isomorphism.
#include "isobound/groups.hpp"

namespace isobound::groups {

namespace {

std::vector<CatalogEntry> build_catalog() {
  std::vector<CatalogEntry> cat;
  auto add = [&cat](std::string name, FiniteGroup g) {
    cat.push_back(CatalogEntry{std::move(name), g.order(), std::move(g)});
  };

  FiniteGroup C2 = cyclic_group(2), C3 = cyclic_group(3), C4 = cyclic_group(4);
  FiniteGroup C2xC2 = direct_product(C2, C2);
  FiniteGroup D4 = dihedral_group(4);
  FiniteGroup Q8 = dicyclic_group(2);
  // order-3 automorphism of C2 x C2 cycling the involutions: (a,b) -> (b,a+b)
  std::vector<size_t> klein3 = {0, 3, 1, 2};
  FiniteGroup A4 = semidirect_cyclic(C2xC2, 3, klein3);

  add("C1", cyclic_group(1));
  add("C2", C2);
  add("C3", C3);

  add("C4", C4);
  add("C2xC2", C2xC2);

  add("C5", cyclic_group(5));

  add("C6", cyclic_group(6));
  add("S3", dihedral_group(3));

  add("C7", cyclic_group(7));

  add("C8", cyclic_group(8));
  add("C4xC2", direct_product(C4, C2));
  add("C2xC2xC2", direct_product(C2xC2, C2));
  add("D4", D4);
  add("Q8", Q8);

  add("C9", cyclic_group(9));
  add("C3xC3", direct_product(C3, C3));

  add("C10", cyclic_group(10));
  add("D5", dihedral_group(5));

  add("C11", cyclic_group(11));

  add("C12", cyclic_group(12));
  add("C6xC2", direct_product(cyclic_group(6), C2));
  add("D6", dihedral_group(6));
  add("A4", A4);
  add("Dic3", dicyclic_group(3));

  add("C13", cyclic_group(13));

  add("C14", cyclic_group(14));
  add("D7", dihedral_group(7));

  add("C15", cyclic_group(15));

  {
    FiniteGroup C8g = cyclic_group(8);
    FiniteGroup C4xC2 = direct_product(C4, C2);
    add("C16", cyclic_group(16));
    add("C4xC4", direct_product(C4, C4));
    // (C4 x C2) : C2 with a -> ab, b -> b; index (i,j) = 2i+j
    std::vector<size_t> aut16_3(8);
    for (size_t i = 0; i < 4; ++i)
      for (size_t j = 0; j < 2; ++j) aut16_3[2 * i + j] = 2 * i + ((i + j) % 2);
    add("(C4xC2):C2", semidirect_cyclic(C4xC2, 2, aut16_3));
    add("C4:C4", semidirect_cyclic(C4, 4, {0, 3, 2, 1}));
    add("C8xC2", direct_product(C8g, C2));
    std::vector<size_t> times5(8), times3(8);
    for (size_t i = 0; i < 8; ++i) {
      times5[i] = (5 * i) % 8;
      times3[i] = (3 * i) % 8;
    }
    add("M16", semidirect_cyclic(C8g, 2, times5));
    add("D8", dihedral_group(8));
    add("SD16", semidirect_cyclic(C8g, 2, times3));
    add("Q16", dicyclic_group(4));
    add("C4xC2xC2", direct_product(C4, C2xC2));
    add("D4xC2", direct_product(D4, C2));
    add("Q8xC2", direct_product(Q8, C2));
    // central product C4 o D4: kill the diagonal central involution (2, r^2)
    FiniteGroup C4xD4 = direct_product(C4, D4);
    size_t z = 2 * D4.order() + 2;  // (2 in C4, r^2 in D4)
    add("C4oD4", quotient(C4xD4, {C4xD4.identity(), z}).quot);
    add("C2^4", direct_product(C2xC2, C2xC2));
  }

  add("C17", cyclic_group(17));

  {
    FiniteGroup C3xC3 = direct_product(C3, C3);
    add("C18", cyclic_group(18));
    add("C6xC3", direct_product(cyclic_group(6), C3));
    add("D9", dihedral_group(9));
    add("C3xS3", direct_product(C3, dihedral_group(3)));
    std::vector<size_t> neg9(9);
    for (size_t i = 0; i < 3; ++i)
      for (size_t j = 0; j < 3; ++j) neg9[3 * i + j] = 3 * ((3 - i) % 3) + (3 - j) % 3;
    add("(C3xC3):C2", semidirect_cyclic(C3xC3, 2, neg9));
  }

  add("C19", cyclic_group(19));

  {
    FiniteGroup C5 = cyclic_group(5);
    add("C20", cyclic_group(20));
    add("C10xC2", direct_product(cyclic_group(10), C2));
    add("D10", dihedral_group(10));
    add("Dic5", dicyclic_group(5));
    std::vector<size_t> times2(5);
    for (size_t i = 0; i < 5; ++i) times2[i] = (2 * i) % 5;
    add("F20", semidirect_cyclic(C5, 4, times2));
  }

  {
    FiniteGroup C7 = cyclic_group(7);
    add("C21", cyclic_group(21));
    std::vector<size_t> times2(7);
    for (size_t i = 0; i < 7; ++i) times2[i] = (2 * i) % 7;
    add("C7:C3", semidirect_cyclic(C7, 3, times2));
  }

  add("C22", cyclic_group(22));
  add("D11", dihedral_group(11));

  add("C23", cyclic_group(23));

  {
    add("C24", cyclic_group(24));
    add("C12xC2", direct_product(cyclic_group(12), C2));
    add("C6xC2xC2", direct_product(cyclic_group(6), C2xC2));
    add("C3:C8", semidirect_cyclic(C3, 8, {0, 2, 1}));
    // i -> j -> ij: generator indices a = (1,0), b = (0,1) in the dicyclic
    // layout, images b and ab
    add("SL(2,3)", semidirect_cyclic(Q8, 3, aut_from_gen_images(Q8, {1, 4}, {4, 5})));
    add("Dic6", dicyclic_group(6));
    add("C4xS3", direct_product(C4, dihedral_group(3)));
    add("D12", dihedral_group(12));
    add("C2xDic3", direct_product(C2, dicyclic_group(3)));
    // C3 : D4 where reflections fix C3 and the rotation of order 4 inverts:
    // (i,e) acts by inversion iff i is odd (kernel <r^2, s>)
    std::vector<std::vector<size_t>> action(8);
    for (size_t e = 0; e < 2; ++e)
      for (size_t i = 0; i < 4; ++i)
        action[e * 4 + i] = (i % 2) ? std::vector<size_t>{0, 2, 1} : std::vector<size_t>{0, 1, 2};
    add("C3:D4", semidirect_general(C3, D4, action));
    add("C3xD4", direct_product(C3, D4));
    add("C3xQ8", direct_product(C3, Q8));
    Perm t12{{1, 0, 2, 3}}, cyc4{{1, 2, 3, 0}};
    add("S4", close_group({t12, cyc4}));
    add("C2xA4", direct_product(C2, A4));
    add("S3xC2xC2", direct_product(dihedral_group(3), C2xC2));
  }

  return cat;
}

}  // namespace

const std::vector<CatalogEntry>& catalog_upto_24() {
  static const std::vector<CatalogEntry> cat = build_catalog();
  return cat;
}

}  // namespace isobound::groups
