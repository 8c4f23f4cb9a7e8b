#pragma once

#include <optional>
#include <string>
#include <string_view>

namespace ssikyc::ledger {

// Syntax rules for the strings that may appear in public ledger objects.
// They admit identifiers, never free text.

// <owner public DID>/<segment>[/<segment>...], segments of [A-Za-z0-9._-].
bool valid_object_id(std::string_view id);
// [a-z][a-z0-9_]{0,63}
bool valid_attr_name(std::string_view name);
// [a-z0-9_-]{1,32}
bool valid_label(std::string_view label);
// mailbox://[a-z0-9._-]{1,64}
bool valid_mailbox_address(std::string_view address);
// digits separated by dots, e.g. "1.0"
bool valid_version_string(std::string_view version);

// DID prefix of an object id ("did:sim:L1:abc/schema/kyc/1.0" -> "did:sim:L1:abc").
std::optional<std::string> owner_of(std::string_view object_id);

}  // namespace ssikyc::ledger
