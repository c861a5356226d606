#pragma once

#include <string_view>

// Text resources compiled into the library from resources/.
namespace reviewbomb::resources {

std::string_view stopwords_en();
std::string_view english_sample();
std::string_view english_common_words();

}  // namespace reviewbomb::resources
