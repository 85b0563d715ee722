// base/textio.h

// Copyright 2026  UVC Authors

// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//  http://www.apache.org/licenses/LICENSE-2.0
//
// THIS CODE IS PROVIDED *AS IS* BASIS, WITHOUT WARRANTIES OR CONDITIONS OF ANY
// KIND, EITHER EXPRESS OR IMPLIED, INCLUDING WITHOUT LIMITATION ANY IMPLIED
// WARRANTIES OR CONDITIONS OF TITLE, FITNESS FOR A PARTICULAR PURPOSE,
// MERCHANTABLITY OR NON-INFRINGEMENT.
// See the Apache 2 License for the specific language governing permissions and
// limitations under the License.

#ifndef UVC_BASE_TEXTIO_H_
#define UVC_BASE_TEXTIO_H_

#include <string>
#include <vector>

namespace uvc {

std::string ReadTextFile(const std::string &path);
void WriteTextFile(const std::string &path, const std::string &content);

std::string Trim(const std::string &s);
std::vector<std::string> SplitWhitespace(const std::string &s);
std::vector<std::string> SplitChar(const std::string &s, char sep);
std::vector<std::string> SplitLines(const std::string &s);

// Parse failures raise ValidationError naming the offending token.
int64_t ParseInt(const std::string &token);
double ParseDouble(const std::string &token);

// Shortest decimal form that round-trips; used by every text artifact so
// identical values always serialize to identical bytes.
std::string FormatDouble(double v);

std::string PathJoin(const std::string &dir, const std::string &rel);
std::string DirName(const std::string &path);

}  // namespace uvc

#endif  // UVC_BASE_TEXTIO_H_
