#pragma once

#include <stdexcept>
#include <string>

#include "dropout/arff.hpp"

namespace dropout::schema {

// The 17-variable student record this pipeline is built around: 16 nominal
// predictors plus the binary Dropout response, each with a closed value set.
// Enumerator order matches the value-set order of builtin_schema(), so
// casting an enumerator to size_t yields its nominal index.

enum class GradeBand { O, A, B, C, D, E, F };

enum class Branch { CS, IT, ME };
enum class Sex { Male, Female };
enum class Category { Unreserved, OBC, SC, ST };
enum class AdmissionType { UPSEE, Direct };
enum class Medium { Hindi, English };
enum class LivingLocation { Village, Town, Tahseel, District };
enum class YesNo { Yes, No };
enum class FamilySize { One, Two, Three, MoreThanThree };  // tokens 1,2,3,>3
enum class FamilyStatus { Joint, Individual };
enum class FamilyIncome { BPL, Poor, Medium, High };
enum class Qualification { NoEducation, Elementary, Secondary, UG, PG, PhD, NA };
enum class FatherOccupation { Service, Business, Agriculture, Retired, NA };
// House-wife is canonicalized to the token HW; the long form is display-only.
enum class MotherOccupation { HW, Service, Retired, NA };

struct StudentRecord {
  Branch branch = Branch::CS;
  Sex sex = Sex::Male;
  Category cat = Category::Unreserved;
  GradeBand hsg = GradeBand::O;
  GradeBand ssg = GradeBand::O;
  AdmissionType atype = AdmissionType::UPSEE;
  Medium med = Medium::Hindi;
  LivingLocation lloc = LivingLocation::Village;
  YesNo hos = YesNo::Yes;
  FamilySize fsize = FamilySize::One;
  FamilyStatus fstat = FamilyStatus::Joint;
  FamilyIncome fain = FamilyIncome::BPL;
  Qualification fqual = Qualification::NoEducation;
  Qualification mqual = Qualification::NoEducation;
  FatherOccupation focc = FatherOccupation::Service;
  MotherOccupation mocc = MotherOccupation::HW;
  YesNo dropout = YesNo::Yes;

  bool operator==(const StudentRecord&) const = default;
};

struct OutOfRange : std::domain_error {
  using std::domain_error::domain_error;
};

struct DomainViolation : std::domain_error {
  using std::domain_error::domain_error;
};

// Percentage-to-band mapping. Bands are half-open so fractional percents
// are classifiable: O >= 90, A [80,90), B [70,80), C [60,70), D [50,60),
// E [40,50), F < 40. Throws OutOfRange outside [0,100].
GradeBand grade_from_percentage(double p);

std::string_view grade_token(GradeBand g);

// The 17 attribute declarations in table order, Dropout last.
const std::vector<arff::AttributeDecl>& builtin_schema();

// Position of the Dropout attribute in builtin_schema().
inline constexpr std::size_t kDropoutIndex = 16;

arff::Row student_to_row(const StudentRecord& s);

// Inverse of student_to_row. Throws DomainViolation on wrong arity, missing
// cells, or indices outside a value set.
StudentRecord row_to_student(const arff::Row& row);

}  // namespace dropout::schema
