#include <gtest/gtest.h>

#include <sstream>

#include "patparse/tagset.hpp"

using namespace patparse;

namespace {

std::string code_of(const std::function<void()> &f) {
  try {
    f();
  } catch (const Error &e) {
    return e.code();
  }
  return "";
}

EquivalenceClassMap nonfinv_map() {
  EquivalenceClassMap eq;
  eq.add_class("nonfinv", {Tag{"-FMAINV"}, Tag{"<NOM-FMAINV"}, Tag{"<P-FMAINV"}});
  return eq;
}

} // namespace

TEST(Tagset, ParseTag) {
  EXPECT_EQ(parse_tag("SUBJ").symbol(), "SUBJ");
  EXPECT_EQ(parse_tag("  +FAUXV ").symbol(), "+FAUXV");
  EXPECT_EQ(code_of([] { parse_tag("A/B"); }), "MalformedTag");
  EXPECT_EQ(code_of([] { parse_tag("   "); }), "MalformedTag");
  EXPECT_EQ(code_of([] { parse_tag("A B"); }), "MalformedTag");
  EXPECT_NE(parse_tag("subj"), parse_tag("SUBJ"));
}

TEST(Tagset, ProjectSymbol) {
  auto eq = nonfinv_map();
  EXPECT_EQ(project_symbol(Tag{"-FMAINV"}, eq), "nonfinv");
  EXPECT_EQ(project_symbol(Tag{"<P-FMAINV"}, eq), "nonfinv");
  EXPECT_EQ(project_symbol(Tag{"SUBJ"}, eq), "SUBJ");
  EquivalenceClassMap empty;
  for (const auto &t : default_inventory().tags()) EXPECT_EQ(project_symbol(t, empty), t.symbol());
}

TEST(Tagset, ClassMapRejectsOverlapAndCollision) {
  EquivalenceClassMap eq = nonfinv_map();
  EXPECT_EQ(code_of([&] { eq.add_class("verbs", {Tag{"-FMAINV"}}); }), "InvalidClassMap");
  EXPECT_EQ(code_of([&] { eq.add_class("empty", {}); }), "InvalidClassMap");
  EquivalenceClassMap clash;
  clash.add_class("SUBJ", {Tag{"OBJ"}});
  EXPECT_EQ(code_of([&] { clash.validate(default_inventory()); }), "InvalidClassMap");
}

TEST(Tagset, DefaultInventoryIsTheEngcgTagSet) {
  const auto &inv = default_inventory();
  EXPECT_EQ(inv.size(), 30u);
  EXPECT_TRUE(inv.contains(Tag{"+FAUXV"}));
  EXPECT_TRUE(inv.contains(Tag{"CS"}));
  EXPECT_TRUE(inv.contains(Tag{"<NOM-OF"}));
  EXPECT_FALSE(inv.contains(punct_tag()));
}

TEST(Tagset, LoadInventory) {
  std::istringstream in("# syntactic tags\nSUBJ\tSubject\n\nOBJ\tObject\n+FAUXV\n");
  auto inv = load_inventory(in);
  EXPECT_EQ(inv.size(), 3u);
  EXPECT_EQ(inv.entries().at(Tag{"SUBJ"}), "Subject");

  std::istringstream empty("# nothing\n\n");
  EXPECT_EQ(code_of([&] { load_inventory(empty); }), "EmptyInventory");
  std::istringstream dup("SUBJ\tSubject\nSUBJ\tagain\n");
  EXPECT_EQ(code_of([&] { load_inventory(dup); }), "DuplicateTag");
  std::istringstream bad("A/B\tslash\n");
  EXPECT_EQ(code_of([&] { load_inventory(bad); }), "MalformedTag");
}

TEST(Tagset, InventoryRoundTripPreservesLineSet) {
  std::ostringstream os;
  write_inventory(default_inventory(), os);
  std::string text = "# header comment\n" + os.str();
  std::istringstream in(text);
  auto inv = load_inventory(in);
  EXPECT_EQ(inv, default_inventory());

  std::ostringstream again;
  write_inventory(inv, again);
  auto lines = [](const std::string &s) {
    std::multiset<std::string> out;
    std::istringstream is(s);
    std::string l;
    while (std::getline(is, l))
      if (!l.empty() && l[0] != '#') out.insert(l);
    return out;
  };
  EXPECT_EQ(lines(again.str()), lines(text));
  EXPECT_EQ(lines(again.str()).size(), 30u);
}
