#include "dropout/schema.hpp"

namespace dropout::schema {

namespace {

arff::AttributeDecl nominal(std::string name, std::vector<std::string> values) {
  return {std::move(name), arff::AttributeKind::Nominal, std::move(values)};
}

const std::vector<std::string> kGradeTokens = {"O", "A", "B", "C",
                                               "D", "E", "F"};
const std::vector<std::string> kQualTokens = {
    "no-education", "elementary", "secondary", "UG", "PG", "Ph.D.", "NA"};

template <typename E>
std::size_t checked_index(const arff::Cell& cell, std::size_t attr,
                          std::size_t limit) {
  if (cell.kind() != arff::Cell::Kind::Nominal)
    throw DomainViolation("cell " + std::to_string(attr) +
                          " is not a nominal value");
  if (cell.index() >= limit)
    throw DomainViolation("cell " + std::to_string(attr) + " index " +
                          std::to_string(cell.index()) +
                          " outside its value set");
  return cell.index();
}

template <typename E>
E decode(const arff::Row& row, std::size_t attr, std::size_t limit) {
  return static_cast<E>(checked_index<E>(row[attr], attr, limit));
}

}  // namespace

GradeBand grade_from_percentage(double p) {
  if (!(p >= 0.0) || p > 100.0)
    throw OutOfRange("percentage " + std::to_string(p) +
                     " outside [0,100]");
  if (p >= 90.0) return GradeBand::O;
  if (p >= 80.0) return GradeBand::A;
  if (p >= 70.0) return GradeBand::B;
  if (p >= 60.0) return GradeBand::C;
  if (p >= 50.0) return GradeBand::D;
  if (p >= 40.0) return GradeBand::E;
  return GradeBand::F;
}

std::string_view grade_token(GradeBand g) {
  return kGradeTokens[static_cast<std::size_t>(g)];
}

const std::vector<arff::AttributeDecl>& builtin_schema() {
  static const std::vector<arff::AttributeDecl> schema = {
      nominal("Branch", {"CS", "IT", "ME"}),
      nominal("Sex", {"Male", "Female"}),
      nominal("Cat", {"Unreserved", "OBC", "SC", "ST"}),
      nominal("HSG", kGradeTokens),
      nominal("SSG", kGradeTokens),
      nominal("Atype", {"UPSEE", "Direct"}),
      nominal("Med", {"Hindi", "English"}),
      nominal("LLoc", {"Village", "Town", "Tahseel", "District"}),
      nominal("Hos", {"Yes", "No"}),
      nominal("FSize", {"1", "2", "3", ">3"}),
      nominal("FStat", {"Joint", "Individual"}),
      nominal("FAIn", {"BPL", "poor", "medium", "high"}),
      nominal("FQual", kQualTokens),
      nominal("MQual", kQualTokens),
      nominal("FOcc", {"Service", "Business", "Agriculture", "Retired", "NA"}),
      nominal("MOcc", {"HW", "Service", "Retired", "NA"}),
      nominal("Dropout", {"Yes", "No"}),
  };
  return schema;
}

arff::Row student_to_row(const StudentRecord& s) {
  auto cell = [](auto e) {
    return arff::Cell::nominal(static_cast<std::size_t>(e));
  };
  return {cell(s.branch), cell(s.sex),   cell(s.cat),   cell(s.hsg),
          cell(s.ssg),    cell(s.atype), cell(s.med),   cell(s.lloc),
          cell(s.hos),    cell(s.fsize), cell(s.fstat), cell(s.fain),
          cell(s.fqual),  cell(s.mqual), cell(s.focc),  cell(s.mocc),
          cell(s.dropout)};
}

StudentRecord row_to_student(const arff::Row& row) {
  const auto& schema = builtin_schema();
  if (row.size() != schema.size())
    throw DomainViolation("row has " + std::to_string(row.size()) +
                          " cells, expected " + std::to_string(schema.size()));
  StudentRecord s;
  s.branch = decode<Branch>(row, 0, 3);
  s.sex = decode<Sex>(row, 1, 2);
  s.cat = decode<Category>(row, 2, 4);
  s.hsg = decode<GradeBand>(row, 3, 7);
  s.ssg = decode<GradeBand>(row, 4, 7);
  s.atype = decode<AdmissionType>(row, 5, 2);
  s.med = decode<Medium>(row, 6, 2);
  s.lloc = decode<LivingLocation>(row, 7, 4);
  s.hos = decode<YesNo>(row, 8, 2);
  s.fsize = decode<FamilySize>(row, 9, 4);
  s.fstat = decode<FamilyStatus>(row, 10, 2);
  s.fain = decode<FamilyIncome>(row, 11, 4);
  s.fqual = decode<Qualification>(row, 12, 7);
  s.mqual = decode<Qualification>(row, 13, 7);
  s.focc = decode<FatherOccupation>(row, 14, 5);
  s.mocc = decode<MotherOccupation>(row, 15, 4);
  s.dropout = decode<YesNo>(row, 16, 2);
  return s;
}

}  // namespace dropout::schema
