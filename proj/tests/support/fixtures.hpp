#pragma once

#include <string>

#include "coql/eval/session.hpp"
#include "coql/order/ordered_model.hpp"

namespace coql::testing {

std::string data_path(const std::string& relative);
std::string read_text(const std::string& path);

struct CliResult {
  int code = -1;
  std::string out, err;
};

/// Runs the coql binary through the shell with `args` appended (quote them
/// yourself); `env` is prepended as `VAR=value` assignments.
CliResult run_cli(const std::string& args, const std::string& env = {});

std::string temp_path(const std::string& name);

/// Session loaded with tests/data/db1.coql.
eval::Session db1_session();

/// Small model: P, Q primitive; a below both; b below a; bottom below a and b.
order::ModelDescription g1_description();

inline constexpr const char* kBerlinPlain = R"((Addresses | city = 'Berlin')
  <- address <- (Persons | age > 20)
  <- owner <- AccountOwners
  -> account -> (Accounts | parent.address.city = 'Bonn');
)";

inline constexpr const char* kBerlinExtended = R"((Addresses | city = 'Berlin')
  <- address <- (Persons | age > 20)
  <- owner <- AccountOwners
  -> account -> (Accounts | parent.address.city = 'Bonn' AND
    this <- account <- AccountOwners >= 2 AND
    SUM(this <- parent <- SavingsAccounts.balance) > 100
  );
)";

inline constexpr const char* kCube = R"(FORALL ( Cities city, Banks bank )
BODY (
  Collection CityAccounts =
    city <- parent <- Addresses
    <- address <- Persons
    <- owner <- AccountOwners
    -> account -> (Accounts | parent.bank == bank )
    measure = SUM( CityAccounts.balance )
)
RETURN ( city, bank, measure )
)";

}  // namespace coql::testing
